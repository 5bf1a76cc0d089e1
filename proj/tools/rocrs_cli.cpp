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


#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rocrs/rocrs.hpp"

namespace {

using rocrs::ExperimentConfig;
using rocrs::ExperimentKind;

constexpr int kExitError = 2;

void add_common(CLI::App* cmd, ExperimentConfig& cfg, std::string& out) {
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--trials", cfg.trials, "number of trials")->check(CLI::PositiveNumber);
  cmd->add_option("--out", out, "CSV report path; the summary goes next to it as .summary.json");
  cmd->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", cfg.eps, "accuracy parameter in (0, 1)");
}

int emit(const rocrs::ExperimentResult& r, const std::string& out) {
  if (out.empty()) {
    std::cout << r.csv;
    std::cerr << r.summary.dump(2) << '\n';
  } else {
    rocrs::write_experiment(r, out);
    std::cout << (r.pass ? "pass" : "FAIL") << ' ' << out << '\n';
  }
  return rocrs::exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-order contention resolution experiments"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string out;
  struct Verb {
    const char* name;
    ExperimentKind kind;
    const char* help;
  };
  const Verb verbs[] = {
      {"crs", ExperimentKind::kCrs, "acceptance probabilities of the CR scheme"},
      {"auction", ExperimentKind::kAuction, "posted-price auction revenue"},
      {"packing", ExperimentKind::kPacking, "stochastic k-set packing"},
      {"probing", ExperimentKind::kProbing, "submodular stochastic probing"},
      {"greedy", ExperimentKind::kGreedy, "measured continuous greedy"},
      {"diagnostics", ExperimentKind::kDiagnostics, "characteristic-sequence diagnostics"},
  };
  for (const auto& v : verbs) {
    auto* verb = app.add_subcommand(v.name, v.help);
    verb->require_subcommand(1);
    auto* run = verb->add_subcommand("run", std::string("run: ") + v.help);
    add_common(run, cfg, out);
    const ExperimentKind kind = v.kind;
    run->callback([&cfg, kind] { cfg.kind = kind; });
    if (kind == ExperimentKind::kGreedy) {
      run->add_option("--oracle", cfg.oracle, "oracle JSON")->required();
      run->add_option("--constraints", cfg.constraints, "constraint JSON")->required();
      run->add_option("--T", cfg.T, "time horizon in (0, 1]");
      run->add_option("--steps", cfg.steps, "grid steps")->check(CLI::PositiveNumber);
    } else {
      run->add_option("--instance", cfg.instance, "instance JSON")->required();
    }
    if (kind == ExperimentKind::kProbing) {
      run->add_flag("!--no-filter", cfg.filter, "disable the marginal-gain filter");
    }
    if (kind == ExperimentKind::kDiagnostics) {
      run->add_option("--trace-trials", cfg.trace_trials,
                      "dump traces of the first trials to <out>.traces.csv");
    }
  }

  rocrs::GenerateParams gp;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "write a random instance");
  gen->add_option("kind", gp.kind, "crs | constraints | oracle | auction | packing | probing")
      ->required();
  gen->add_option("--seed", gp.seed, "seed");
  gen->add_option("--out", gen_out, "output path (stdout when absent)");
  gen->add_option("--n", gp.n, "ground set size");
  gen->add_option("--graphic", gp.graphic, "graphic matroids");
  gen->add_option("--partition", gp.partition, "partition matroids");
  gen->add_option("--uniform", gp.uniform, "uniform matroids");
  gen->add_option("--knapsacks", gp.knapsacks, "knapsack constraints");
  gen->add_flag("--big", gp.big, "allow knapsack sizes above 1/2");
  gen->add_option("--scale", gp.scale, "scale of the generated point");
  gen->add_option("--oracle", gp.oracle, "coverage | cut");
  gen->add_option("--universe", gp.universe, "coverage universe size");
  gen->add_option("--clients", gp.clients, "auction clients");
  gen->add_option("--per-client", gp.per_client, "items per client");
  gen->add_option("--max-value", gp.max_value, "largest value");
  gen->add_option("--k", gp.k, "matroids over the items (auction) or rows per element (packing)");
  gen->add_option("--rows", gp.rows, "packing rows");
  gen->add_option("--k-in", gp.k_in, "inner matroids (probing)");
  gen->add_option("--k-out", gp.k_out, "outer matroids (probing)");
  gen->add_flag("--point", gp.point, "include a feasible point (packing, probing)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (gen->parsed()) {
      const auto doc = rocrs::generate_instance(gp);
      if (gen_out.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        rocrs::write_json_file(gen_out, doc);
      }
      return 0;
    }
    return emit(rocrs::run_experiment(cfg), out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
