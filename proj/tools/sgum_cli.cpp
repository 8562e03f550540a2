// Copyright 2026 The SGUM Toolkit Authors.
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

// sgum: run a seeded experiment and write CSV plus manifest.json.
//
//   sgum spectrum --config run.json --out-dir out/
//   sgum sweep --seed 7 --replications 100 --out-dir out/
//   sgum spectrum --config out/manifest.json --out-dir again/
//
// Exit status: 0 on success, 2 on bad input, 1 on any other failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgum/errors.hpp"
#include "sgum/experiment.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::string out_dir = "sgum_out";
  unsigned threads = 0;
};

std::vector<sgum::ExperimentKind> kinds_for(const std::string& sub) {
  using K = sgum::ExperimentKind;
  if (sub == "spectrum") return {K::kSpectrumChain, K::kThetaTradeoff};
  if (sub == "power") return {K::kPowerSweep};
  if (sub == "random-access") return {K::kRandomAccessSweep};
  if (sub == "stationary") return {K::kStationary};
  return {K::kSpectrumSweep, K::kPowerSweep, K::kRandomAccessSweep};
}

sgum::ExperimentConfig build_config(const std::string& sub,
                                    const Options& opt) {
  const auto kinds = kinds_for(sub);
  sgum::ExperimentConfig cfg;
  if (opt.config.empty()) {
    const std::string kind = "{\"experiment\": \"" +
                             sgum::to_string(kinds.front()) + "\"}";
    cfg = sgum::parse_config(kind);
  } else {
    cfg = sgum::load_config(opt.config);
    bool allowed = false;
    for (auto k : kinds) allowed = allowed || k == cfg.kind;
    if (!allowed) {
      throw sgum::ValidationError("experiment '" + sgum::to_string(cfg.kind) +
                                  "' does not belong to subcommand '" + sub +
                                  "'");
    }
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.replications) cfg.replications = *opt.replications;
  sgum::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social group utility maximization experiments"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"spectrum", "spectrum-chain or spectrum-theta-tradeoff"},
      {"power", "power-sweep over tie weights"},
      {"random-access", "random-access-sweep over tie weights"},
      {"stationary", "exact stationary law, gap and mixing bounds"},
      {"sweep", "spectrum-sweep-PL, or any tie-weight sweep config"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config,
                    "JSON config or a manifest.json from an earlier run")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "master seed (overrides config)");
    sub->add_option("--replications", opt.replications,
                    "replication count (overrides config)");
    sub->add_option("--out-dir", opt.out_dir, "output directory")
        ->capture_default_str();
    sub->add_option("--threads", opt.threads, "worker threads, 0 = all cores")
        ->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const sgum::ExperimentConfig cfg = build_config(sub, opt);
    const sgum::ExperimentResult res = sgum::run_experiment(cfg, opt.threads);
    sgum::write_outputs(opt.out_dir, cfg, res);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : res.files) {
      std::cout << (std::filesystem::path(opt.out_dir) / f.name).string()
                << '\n';
    }
    return 0;
  } catch (const sgum::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sgum::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
