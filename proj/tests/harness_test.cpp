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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rocrs/experiment.hpp"
#include "rocrs/io.hpp"
#include "test_util.hpp"

namespace rocrs {
namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = ::testing::TempDir() + "/rocrs_" + name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parse_error_of(const std::string& text) {
  try {
    parse_crs_instance(parse_json(text, "doc"));
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(Stats, WilsonInterval) {
  EXPECT_FALSE(wilson_interval(0, 0, 1.96).has_value());
  const auto a = wilson_interval(50, 100, 1.96);
  EXPECT_NEAR(a->lo, 0.40382982859014715, 1e-12);
  EXPECT_NEAR(a->hi, 0.59617017140985285, 1e-12);
  EXPECT_EQ(wilson_interval(100, 100, kWilsonZ)->hi, 1.0);
  EXPECT_EQ(wilson_interval(0, 100, kWilsonZ)->lo, 0.0);
  const auto b = wilson_interval(3, 10, kWilsonZ);
  EXPECT_NEAR(b->lo, 0.07955986884128883, 1e-12);
  EXPECT_NEAR(b->hi, 0.67999447957023102, 1e-12);
  EXPECT_THROW(wilson_interval(3, 2, kWilsonZ), InputError);
}

TEST(Stats, PassRule) {
  EXPECT_TRUE(passes_lower_bound(0.47, 0.01, 0.5));
  EXPECT_FALSE(passes_lower_bound(0.469, 0.01, 0.5));
  EXPECT_TRUE(passes_lower_bound(0.5, 0.0, 0.5));
}

TEST(Seeds, DerivationIsPinned) {
  EXPECT_EQ(derive_seed(1, 0), 0x5e41ab087439611eULL);
  EXPECT_EQ(derive_seed(1, 1), 0x23a7f6b5d2d552d8ULL);
  EXPECT_EQ(derive_seed(42, 7), 0x0d4471d7a7c7c61cULL);
}

TEST(Io, ConstraintRoundTrip) {
  Rng rng(1);
  std::vector<Constraint> cs{Matroid::uniform(5, 2),
                             Matroid::partition(5, {{0, 1}, {3}}, {1, 1}),
                             testing::random_graphic(rng, 4, 5),
                             Matroid::explicit_family(5, {{}, {0}, {1}, {0, 1}}),
                             KnapsackConstraint({0.3, 0.7, 0.1, 0.2, 0.5})};
  const json j = {{"n", 5}, {"constraints", constraints_to_json(cs)}};
  int n = 0;
  const auto back = parse_constraint_file(parse_json(j.dump(), "doc"), &n);
  EXPECT_EQ(n, 5);
  ASSERT_EQ(back.size(), cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(constraint_name(back[i]), constraint_name(cs[i]));
    for (std::uint64_t s = 0; s < 32; ++s) {
      EXPECT_EQ(is_feasible(back[i], ElementSet(s)), is_feasible(cs[i], ElementSet(s)));
    }
  }
  EXPECT_EQ(constraints_to_json(back), j["constraints"]);
}

TEST(Io, KnapsackReduceDefaultsToUnbounded) {
  const auto inst = parse_crs_instance(parse_json(
      R"({"n":2,"x":[0.4,0.4],"constraints":[{"kind":"knapsack","sizes":[0.6,0.3]},
          {"kind":"knapsack","sizes":[0.2,0.3]},
          {"kind":"knapsack","sizes":[0.2,0.3],"reduce":true}]})",
      "doc"));
  EXPECT_TRUE(inst.reduced(0));
  EXPECT_FALSE(inst.reduced(1));
  EXPECT_TRUE(inst.reduced(2));
  const auto again = parse_crs_instance(crs_instance_to_json(inst));
  EXPECT_EQ(again.reduce, inst.reduce);
}

TEST(Io, ErrorsNameTheOffendingKey) {
  EXPECT_NE(parse_error_of(R"({"x":[0.5],"constraints":[]})").find("n: missing"), std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n":1,"x":[0.5],"constraints":[{"kind":"uniform","rank":1}]})")
                .find("constraints[0].r"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n":2,"x":[0.5,"a"],"constraints":[]})").find("x[1]"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n":2,"x":[0.5],"constraints":[]})").find("x: expected 2"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n":2,"x":[0.5,0.5],"constraints":[{"kind":"fancy"}]})")
                .find("constraints[0].kind"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n":2,"x":[0.5,0.5],"constraints":[{"kind":"partition","blocks":[[0,5]],"caps":[1]}]})")
                .find("constraints[0]: partition matroid: element 5 out of range"),
            std::string::npos);
  EXPECT_NE(parse_error_of("{\"n\":2,\n\"x\":[0.5,]}").find("doc:2:10"), std::string::npos);
}

TEST(Io, OracleRoundTrip) {
  Rng rng(2);
  const std::vector<SubmodularOracle> fs{SubmodularOracle::modular({1.0, 2.0, 0.5}),
                                         testing::random_coverage(rng, 3, 4),
                                         testing::random_cut(rng, 3),
                                         SubmodularOracle::table(3, {0, 1, 1, 2, 1, 2, 2, 2})};
  for (const auto& f : fs) {
    const auto g = parse_oracle(io::Node(parse_json(oracle_to_json(f).dump(), "doc"), ""));
    EXPECT_EQ(g.kind_name(), f.kind_name());
    for (std::uint64_t s = 0; s < 8; ++s) EXPECT_EQ(g(ElementSet(s)), f(ElementSet(s)));
  }
}

TEST(Io, InstanceDocumentsRoundTrip) {
  for (const std::string kind : {"crs", "auction", "packing", "probing"}) {
    GenerateParams g;
    g.kind = kind;
    g.seed = 5;
    g.n = 6;
    g.knapsacks = 1;
    g.point = true;
    const json doc = generate_instance(g);
    json again;
    if (kind == "crs") again = crs_instance_to_json(parse_crs_instance(doc));
    if (kind == "auction") again = auction_instance_to_json(parse_auction_instance(doc));
    if (kind == "packing") {
      const auto d = parse_packing_instance(doc);
      again = packing_instance_to_json(d.instance, d.x);
    }
    if (kind == "probing") {
      const auto d = parse_probing_instance(doc);
      again = probing_instance_to_json(d.instance, d.x);
    }
    EXPECT_EQ(again.dump(), doc.dump()) << kind;
  }
}

TEST(Io, PackingOutcomeRowsMustStayInQ) {
  const auto text = R"({"n":1,"rows":[{"kind":"uniform","r":1},{"kind":"uniform","r":1}],
    "elements":[{"Q":[0],"outcomes":[{"prob":1.0,"v":2,"L":[1,1]}]}]})";
  EXPECT_THROW(parse_packing_instance(parse_json(text, "doc")), InputError);
}

TEST(Generate, DeterministicAndFeasible) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenerateParams g;
    g.seed = seed;
    g.n = 7;
    g.partition = 1;
    g.knapsacks = static_cast<int>(seed % 3);
    g.big = seed % 2 == 0;
    EXPECT_EQ(generate_instance(g).dump(), generate_instance(g).dump());
    const auto inst = parse_crs_instance(generate_instance(g));
    for (const auto& c : inst.constraints) {
      EXPECT_TRUE(in_constraint_polytope(c, inst.x, 1e-9));
    }
  }
  GenerateParams a, b;
  b.seed = 2;
  EXPECT_NE(generate_instance(a).dump(), generate_instance(b).dump());
}

TEST(Generate, PartitionCapsGiveEqualBlocks) {
  const auto m = generate_partition(4, {1, 1});
  const auto& p = std::get<Matroid::Partition>(m.kind());
  ASSERT_EQ(p.blocks.size(), 2U);
  EXPECT_EQ(p.blocks[0], ElementSet::of({0, 1}));
  EXPECT_EQ(p.blocks[1], ElementSet::of({2, 3}));
}

TEST(Generate, RejectsBadParameters) {
  GenerateParams g;
  g.graphic = 0;
  EXPECT_THROW(generate_instance(g), InputError);
  g.kind = "zebra";
  EXPECT_THROW(generate_instance(g), InputError);
}

ExperimentResult run_with_jobs(ExperimentConfig cfg, int jobs) {
  cfg.jobs = jobs;
  return run_experiment(cfg);
}

TEST(Experiment, OutputIndependentOfJobs) {
  GenerateParams g;
  g.n = 6;
  g.knapsacks = 1;
  const auto crs = temp_file("crs.json", generate_instance(g).dump());
  g.kind = "auction";
  const auto auction = temp_file("auction.json", generate_instance(g).dump());
  g.kind = "packing";
  const auto packing = temp_file("packing.json", generate_instance(g).dump());
  g.kind = "probing";
  const auto probing = temp_file("probing.json", generate_instance(g).dump());
  g.kind = "oracle";
  const auto oracle = temp_file("oracle.json", generate_instance(g).dump());
  g.kind = "constraints";
  const auto constraints = temp_file("constraints.json", generate_instance(g).dump());

  const std::pair<ExperimentKind, std::string> runs[] = {
      {ExperimentKind::kCrs, crs},         {ExperimentKind::kAuction, auction},
      {ExperimentKind::kPacking, packing}, {ExperimentKind::kProbing, probing},
      {ExperimentKind::kGreedy, ""},       {ExperimentKind::kDiagnostics, crs}};
  for (const auto& [kind, path] : runs) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.instance = path;
    cfg.oracle = oracle;
    cfg.constraints = constraints;
    cfg.trials = 3000;
    cfg.seed = 11;
    cfg.trace_trials = 3;
    const auto a = run_with_jobs(cfg, 1);
    const auto b = run_with_jobs(cfg, 3);
    const auto c = run_with_jobs(cfg, 1);
    EXPECT_EQ(a.csv, b.csv) << kind_name(kind);
    EXPECT_EQ(a.summary.dump(), b.summary.dump()) << kind_name(kind);
    EXPECT_EQ(a.csv, c.csv) << kind_name(kind);
    EXPECT_EQ(a.traces, b.traces);
    EXPECT_TRUE(a.pass) << kind_name(kind) << "\n" << a.summary.dump(2);
    EXPECT_EQ(exit_code(a), 0);
    EXPECT_EQ(a.csv.find('\r'), std::string::npos);
  }
}

TEST(Experiment, CrsReportFormat) {
  const auto path = temp_file("crs_fmt.json",
                              R"({"n":2,"x":[0.5,0.5],"constraints":[{"kind":"uniform","r":1}]})");
  ExperimentConfig cfg;
  cfg.instance = path;
  cfg.trials = 1000;
  const auto r = run_experiment(cfg);
  std::istringstream lines(r.csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "element,conditioning_count,accept_count,mean,stderr,wilson_lo,wilson_hi,bound,pass");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
    EXPECT_EQ(line.substr(line.size() - 4), "true");
  }
  EXPECT_EQ(rows, 2);
  // Brute force: accepted iff first of the active elements, 1 - 0.5/2.
  EXPECT_NEAR(r.summary["exact_acceptance"][0].get<double>(), 0.75, 1e-12);

  const std::string out = ::testing::TempDir() + "/rocrs_report.csv";
  write_experiment(r, out);
  EXPECT_EQ(slurp(out), r.csv);
  EXPECT_EQ(json::parse(slurp(::testing::TempDir() + "/rocrs_report.summary.json")), r.summary);
}

TEST(Experiment, FailingBoundGivesNonzeroExit) {
  ExperimentResult r;
  r.pass = false;
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig cfg;
  EXPECT_THROW(run_experiment(cfg), InputError);  // no instance
  cfg.instance = "x.json";
  cfg.eps = 1.0;
  EXPECT_THROW(run_experiment(cfg), InputError);
  cfg.eps = 0.1;
  cfg.trials = 0;
  EXPECT_THROW(run_experiment(cfg), InputError);
  cfg.trials = 10;
  cfg.instance = ::testing::TempDir() + "/rocrs_missing_file.json";
  EXPECT_THROW(run_experiment(cfg), InputError);
  EXPECT_THROW(parse_kind("plot"), InputError);
}

TEST(Experiment, BundledInstancesPass) {
  namespace fs = std::filesystem;
  const fs::path root(ROCRS_INSTANCE_DIR);
  const std::pair<const char*, ExperimentKind> dirs[] = {
      {"small", ExperimentKind::kCrs},         {"crs", ExperimentKind::kCrs},
      {"auction", ExperimentKind::kAuction},   {"packing", ExperimentKind::kPacking},
      {"probing", ExperimentKind::kProbing}};
  int runs = 0;
  for (const auto& [dir, kind] : dirs) {
    for (const auto& entry : fs::directory_iterator(root / dir)) {
      ExperimentConfig cfg;
      cfg.kind = kind;
      cfg.instance = entry.path().string();
      cfg.trials = 20000;
      const auto r = run_experiment(cfg);
      EXPECT_TRUE(r.pass) << cfg.instance;
      if (r.summary.contains("exact_pass")) {
        EXPECT_TRUE(r.summary["exact_pass"].get<bool>()) << cfg.instance;
      }
      ++runs;
    }
  }
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kGreedy;
  cfg.oracle = (root / "greedy" / "cut_n10.json").string();
  cfg.constraints = (root / "greedy" / "graphic_n10.json").string();
  EXPECT_TRUE(run_experiment(cfg).pass);
  EXPECT_EQ(runs, 16);
}

}  // namespace
}  // namespace rocrs
