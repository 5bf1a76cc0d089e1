// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROCRS_IO_HPP
#define ROCRS_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rocrs/constraint.hpp"
#include "rocrs/crs.hpp"
#include "rocrs/error.hpp"
#include "rocrs/instances.hpp"
#include "rocrs/submodular.hpp"

namespace rocrs {

using json = nlohmann::json;

// Malformed or inconsistent instance document. The message starts with the
// path of the offending key, e.g. "constraints[1].sizes[2]".
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

namespace io {

// A JSON value together with its path inside the document.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  bool has(const char* key) const { return j_->is_object() && j_->contains(key); }

  Node at(const char* key) const {
    if (!j_->is_object()) fail("expected an object");
    const auto it = j_->find(key);
    if (it == j_->end()) {
      throw ParseError(child_path(key) + ": missing required key");
    }
    return Node(*it, child_path(key));
  }
  Node at(std::size_t i) const { return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    return j_->get<double>();
  }
  int integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<int>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).number();
    return v;
  }
  std::vector<int> integers() const {
    std::vector<int> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).integer();
    return v;
  }
  std::vector<std::vector<int>> integer_lists() const {
    std::vector<std::vector<int>> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).integers();
    return v;
  }

 private:
  std::string child_path(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const json* j_;
  std::string path_;
};

// Runs fn and prefixes any library validation error with the node's path.
template <typename Fn>
auto guarded(const Node& node, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    node.fail(e.what());
  }
}

inline std::vector<int> set_list(ElementSet s) {
  std::vector<int> v;
  for (int e : s) v.push_back(e);
  return v;
}

}  // namespace io

/// Parses and validates a JSON document; syntax errors carry line and column.
inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": invalid JSON");
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << j.dump(2) << '\n';
}

// ---- constraints ----

struct ParsedConstraint {
  Constraint constraint;
  bool reduce = false;
};

/// Matroid kinds: uniform, partition, graphic, explicit; plus knapsack.
/// n is the ground set size of the enclosing document.
inline ParsedConstraint parse_constraint(const io::Node& node, int n) {
  const std::string kind = node.at("kind").string();
  if (kind == "uniform") {
    const int r = node.at("r").integer();
    return {io::guarded(node, [&] { return Constraint(Matroid::uniform(n, r)); })};
  }
  if (kind == "partition") {
    const auto blocks = node.at("blocks").integer_lists();
    const auto caps = node.at("caps").integers();
    return {io::guarded(node, [&] { return Constraint(Matroid::partition(n, blocks, caps)); })};
  }
  if (kind == "graphic") {
    const int vertices = node.at("vertices").integer();
    const auto edges_node = node.at("edges");
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < edges_node.size(); ++i) {
      const auto uv = edges_node.at(i).integers();
      if (uv.size() != 2) edges_node.at(i).fail("an edge needs two endpoints");
      edges.emplace_back(uv[0], uv[1]);
    }
    if (static_cast<int>(edges.size()) != n) {
      edges_node.fail("graphic matroid needs one edge per element (" + std::to_string(n) + ")");
    }
    return {io::guarded(node, [&] { return Constraint(Matroid::graphic(vertices, edges)); })};
  }
  if (kind == "explicit") {
    const auto sets = node.at("independent").integer_lists();
    return {io::guarded(node, [&] { return Constraint(Matroid::explicit_family(n, sets)); })};
  }
  if (kind == "knapsack") {
    const auto sizes_node = node.at("sizes");
    const auto sizes = sizes_node.numbers();
    if (static_cast<int>(sizes.size()) != n) {
      sizes_node.fail("expected " + std::to_string(n) + " sizes");
    }
    ParsedConstraint pc{io::guarded(sizes_node, [&] { return Constraint(KnapsackConstraint(sizes)); })};
    const auto& k = std::get<KnapsackConstraint>(pc.constraint);
    pc.reduce = node.has("reduce") ? node.at("reduce").boolean() : !k.bounded();
    return pc;
  }
  node.at("kind").fail("unknown constraint kind '" + kind + "'");
}

inline json matroid_to_json(const Matroid& m) {
  return std::visit(
      [&](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Matroid::Uniform>) {
          return {{"kind", "uniform"}, {"r", k.rank}};
        } else if constexpr (std::is_same_v<T, Matroid::Partition>) {
          json blocks = json::array();
          for (const auto& b : k.blocks) blocks.push_back(io::set_list(b));
          return {{"kind", "partition"}, {"blocks", blocks}, {"caps", k.caps}};
        } else if constexpr (std::is_same_v<T, Matroid::Graphic>) {
          json edges = json::array();
          for (auto [u, v] : k.edges) edges.push_back({u, v});
          return {{"kind", "graphic"}, {"vertices", k.vertices}, {"edges", edges}};
        } else {
          json sets = json::array();
          for (auto b : k.independent) sets.push_back(io::set_list(ElementSet(b)));
          return {{"kind", "explicit"}, {"independent", sets}};
        }
      },
      m.kind());
}

inline json constraint_to_json(const Constraint& c, bool reduce = false) {
  if (const auto* m = std::get_if<Matroid>(&c)) return matroid_to_json(*m);
  const auto& k = std::get<KnapsackConstraint>(c);
  json j = {{"kind", "knapsack"}, {"sizes", k.sizes()}};
  if (reduce != !k.bounded()) j["reduce"] = reduce;
  return j;
}

inline std::vector<ParsedConstraint> parse_constraints(const io::Node& node, int n) {
  std::vector<ParsedConstraint> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(parse_constraint(node.at(i), n));
  return out;
}

inline std::vector<Constraint> strip(const std::vector<ParsedConstraint>& pcs) {
  std::vector<Constraint> cs;
  for (const auto& pc : pcs) cs.push_back(pc.constraint);
  return cs;
}

inline json constraints_to_json(const std::vector<Constraint>& cs,
                                const std::vector<bool>& reduce = {}) {
  json arr = json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (reduce.empty()) {
      const auto* k = std::get_if<KnapsackConstraint>(&cs[i]);
      arr.push_back(constraint_to_json(cs[i], k != nullptr && !k->bounded()));
    } else {
      arr.push_back(constraint_to_json(cs[i], reduce[i]));
    }
  }
  return arr;
}

// ---- oracles ----

/// {"kind":"modular","weights":[...]}, {"kind":"coverage","universe_weights":
/// [...],"covers":[[...],...]}, {"kind":"cut","vertices":n,"edges":[[u,v,w],...]},
/// {"kind":"explicit","n":n,"values":[...]} (indexed by subset bitmask).
inline SubmodularOracle parse_oracle(const io::Node& node) {
  const std::string kind = node.at("kind").string();
  if (kind == "modular") {
    const auto w = node.at("weights").numbers();
    return io::guarded(node, [&] { return SubmodularOracle::modular(w); });
  }
  if (kind == "coverage") {
    const auto uw = node.at("universe_weights").numbers();
    const auto covers = node.at("covers").integer_lists();
    return io::guarded(node, [&] { return SubmodularOracle::coverage(uw, covers); });
  }
  if (kind == "cut") {
    const int vertices = node.at("vertices").integer();
    const auto edges_node = node.at("edges");
    std::vector<SubmodularOracle::Cut::Edge> edges;
    for (std::size_t i = 0; i < edges_node.size(); ++i) {
      const auto e = edges_node.at(i);
      if (e.size() != 3) e.fail("a cut edge is [u, v, weight]");
      edges.push_back({e.at(std::size_t{0}).integer(), e.at(std::size_t{1}).integer(), e.at(std::size_t{2}).number()});
    }
    return io::guarded(node, [&] { return SubmodularOracle::cut(vertices, edges); });
  }
  if (kind == "explicit") {
    const int n = node.at("n").integer();
    const auto values = node.at("values").numbers();
    return io::guarded(node, [&] { return SubmodularOracle::table(n, values); });
  }
  node.at("kind").fail("unknown oracle kind '" + kind + "'");
}

inline json oracle_to_json(const SubmodularOracle& f) {
  return std::visit(
      [&](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SubmodularOracle::Modular>) {
          return {{"kind", "modular"}, {"weights", k.weights}};
        } else if constexpr (std::is_same_v<T, SubmodularOracle::Coverage>) {
          json covers = json::array();
          for (const auto& c : k.covers) covers.push_back(io::set_list(c));
          return {{"kind", "coverage"}, {"universe_weights", k.universe_weights}, {"covers", covers}};
        } else if constexpr (std::is_same_v<T, SubmodularOracle::Cut>) {
          json edges = json::array();
          for (const auto& e : k.edges) edges.push_back({e.u, e.v, e.w});
          return {{"kind", "cut"}, {"vertices", f.size()}, {"edges", edges}};
        } else {
          return {{"kind", "explicit"}, {"n", f.size()}, {"values", k.values}};
        }
      },
      f.kind());
}

// ---- instance documents ----

inline int ground_size(const io::Node& root) {
  const auto nn = root.at("n");
  const int n = nn.integer();
  if (n < 0 || n > kMaxElements) nn.fail("ground set size out of range");
  return n;
}

inline std::vector<double> parse_point(const io::Node& node, int n) {
  auto x = node.numbers();
  if (static_cast<int>(x.size()) != n) node.fail("expected " + std::to_string(n) + " entries");
  return x;
}

/// {"type":"crs","n":..,"x":[...],"constraints":[...]}
inline CrsInstance parse_crs_instance(const json& j) {
  const io::Node root(j, "");
  const int n = ground_size(root);
  CrsInstance inst;
  inst.n = n;
  inst.x = parse_point(root.at("x"), n);
  const auto pcs = parse_constraints(root.at("constraints"), n);
  inst.constraints = strip(pcs);
  for (const auto& pc : pcs) inst.reduce.push_back(pc.reduce);
  io::guarded(root, [&] { inst.validate(); });
  return inst;
}

inline json crs_instance_to_json(const CrsInstance& inst) {
  return {{"type", "crs"},
          {"n", inst.n},
          {"x", inst.x},
          {"constraints", constraints_to_json(inst.constraints, inst.reduce)}};
}

/// {"type":"auction","items":m,"clients":[[items...],...],"pmf":[[...],...],
///  "constraints":[...]}
inline AuctionInstance parse_auction_instance(const json& j) {
  const io::Node root(j, "");
  AuctionInstance inst;
  inst.items = root.at("items").integer();
  if (inst.items < 0 || inst.items > kMaxElements) root.at("items").fail("item count out of range");
  inst.clients = root.at("clients").integer_lists();
  const auto pmf = root.at("pmf");
  for (std::size_t c = 0; c < pmf.size(); ++c) inst.pmf.push_back(pmf.at(c).numbers());
  const auto pcs = parse_constraints(root.at("constraints"), inst.items);
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    if (pcs[i].reduce) {
      root.at("constraints").at(i).fail("the auction needs knapsack sizes at most 1/2");
    }
  }
  inst.constraints = strip(pcs);
  io::guarded(root, [&] { inst.validate(); });
  return inst;
}

inline json auction_instance_to_json(const AuctionInstance& inst) {
  return {{"type", "auction"},
          {"items", inst.items},
          {"clients", inst.clients},
          {"pmf", inst.pmf},
          {"constraints", constraints_to_json(inst.constraints)}};
}

struct ProbingDocument {
  ProbingInstance instance;
  std::optional<std::vector<double>> x;
};

/// {"type":"probing","n":..,"p":[...],"inner":[...],"outer":[...],
///  "oracle":{...},"x":[...] (optional)}
inline ProbingDocument parse_probing_instance(const json& j) {
  const io::Node root(j, "");
  ProbingDocument doc;
  auto& inst = doc.instance;
  inst.n = ground_size(root);
  inst.p = parse_point(root.at("p"), inst.n);
  inst.inner = strip(parse_constraints(root.at("inner"), inst.n));
  inst.outer = strip(parse_constraints(root.at("outer"), inst.n));
  inst.f = parse_oracle(root.at("oracle"));
  if (root.has("x")) doc.x = parse_point(root.at("x"), inst.n);
  io::guarded(root, [&] { inst.validate(); });
  return doc;
}

inline json probing_instance_to_json(const ProbingInstance& inst,
                                     const std::optional<std::vector<double>>& x = {}) {
  json j = {{"type", "probing"},
            {"n", inst.n},
            {"p", inst.p},
            {"inner", constraints_to_json(inst.inner)},
            {"outer", constraints_to_json(inst.outer)},
            {"oracle", oracle_to_json(inst.f)}};
  if (x) j["x"] = *x;
  return j;
}

struct PackingDocument {
  PackingInstance instance;
  std::optional<std::vector<double>> x;
};

/// {"type":"packing","n":..,"rows":[matroid,...],"elements":[{"Q":[rows],
///  "outcomes":[{"prob":0.5,"v":3,"L":[1,0,1]},...]},...],"x":[...] (optional)}
/// L is the 0/1 indicator over rows of where the copy materializes.
inline PackingDocument parse_packing_instance(const json& j) {
  const io::Node root(j, "");
  PackingDocument doc;
  auto& inst = doc.instance;
  inst.n = ground_size(root);
  const auto rows = root.at("rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto pc = parse_constraint(rows.at(i), inst.n);
    if (!is_matroid(pc.constraint)) rows.at(i).fail("rows must be matroids");
    inst.row_matroids.push_back(std::get<Matroid>(pc.constraint));
  }
  const int d = inst.row_count();
  const auto elements = root.at("elements");
  if (static_cast<int>(elements.size()) != inst.n) {
    elements.fail("expected " + std::to_string(inst.n) + " elements");
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto el = elements.at(e);
    ElementSet q;
    for (int i : el.at("Q").integers()) {
      if (i < 0 || i >= d) el.at("Q").fail("row " + std::to_string(i) + " out of range");
      q.insert(i);
    }
    inst.rows.push_back(q);
    const auto outs = el.at("outcomes");
    std::vector<PackingInstance::Outcome> list;
    for (std::size_t k = 0; k < outs.size(); ++k) {
      const auto o = outs.at(k);
      PackingInstance::Outcome out;
      out.prob = o.at("prob").number();
      out.value = o.at("v").number();
      const auto l = o.at("L").integers();
      if (static_cast<int>(l.size()) != d) o.at("L").fail("expected one entry per row");
      for (int i = 0; i < d; ++i) {
        const int b = l[static_cast<std::size_t>(i)];
        if (b != 0 && b != 1) o.at("L").fail("entries must be 0 or 1");
        if (b == 1) out.rows.insert(i);
      }
      list.push_back(out);
    }
    inst.outcomes.push_back(std::move(list));
  }
  if (root.has("x")) doc.x = parse_point(root.at("x"), inst.n);
  io::guarded(root, [&] { inst.validate(); });
  return doc;
}

inline json packing_instance_to_json(const PackingInstance& inst,
                                     const std::optional<std::vector<double>>& x = {}) {
  json rows = json::array();
  for (const auto& m : inst.row_matroids) rows.push_back(matroid_to_json(m));
  json elements = json::array();
  const int d = inst.row_count();
  for (int e = 0; e < inst.n; ++e) {
    json outs = json::array();
    for (const auto& o : inst.outcomes[static_cast<std::size_t>(e)]) {
      std::vector<int> l(static_cast<std::size_t>(d), 0);
      for (int i : o.rows) l[static_cast<std::size_t>(i)] = 1;
      outs.push_back({{"prob", o.prob}, {"v", o.value}, {"L", l}});
    }
    elements.push_back({{"Q", io::set_list(inst.rows[static_cast<std::size_t>(e)])}, {"outcomes", outs}});
  }
  json j = {{"type", "packing"}, {"n", inst.n}, {"rows", rows}, {"elements", elements}};
  if (x) j["x"] = *x;
  return j;
}

/// Constraint file for the greedy experiment: {"n":..,"constraints":[...]}.
inline std::vector<Constraint> parse_constraint_file(const json& j, int* n_out = nullptr) {
  const io::Node root(j, "");
  const int n = ground_size(root);
  if (n_out) *n_out = n;
  return strip(parse_constraints(root.at("constraints"), n));
}

inline std::string document_type(const json& j) {
  return io::Node(j, "").at("type").string();
}

}  // namespace rocrs

#endif  // ROCRS_IO_HPP
