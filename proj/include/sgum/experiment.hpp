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

// Seeded experiment driver. A JSON config selects an experiment kind and
// its parameters; run_experiment returns CSV files, and write_outputs also
// writes a manifest that can be passed back as a config to regenerate the
// same bytes.
//
// Replication r uses the seed derive_seed(seed, r) and splits it further
// with derive_seed(rs, k): k = 0 scenario, 1 social graph, 2 chain or
// fallback simulation, 3 initial profile.

#ifndef SGUM_EXPERIMENT_HPP_
#define SGUM_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sgum/power_control.hpp"
#include "sgum/random_access.hpp"
#include "sgum/social_graph.hpp"
#include "sgum/spectrum_model.hpp"

namespace sgum {

inline constexpr int kCsvSchemaVersion = 1;

enum class ExperimentKind {
  kSpectrumChain,
  kSpectrumSweep,
  kThetaTradeoff,
  kPowerSweep,
  kRandomAccessSweep,
  kStationary,
};

// "spectrum-chain", "spectrum-sweep-PL", "spectrum-theta-tradeoff",
// "power-sweep", "random-access-sweep", "stationary-analysis".
std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct SocialSpec {
  std::string kind = "empty";  // er | edge-list | complete | empty
  double p_link = 0.5;
  double weight = 1.0;
  std::string path;             // edge-list only
  bool symmetrize = false;
  std::optional<double> detection_range;
};

// Explicit spectrum instance; replaces the random generator when set.
struct SpectrumInstance {
  std::vector<Eigen::Vector2d> positions;
  Eigen::VectorXd powers;  // watts
  double alpha = 4.0;
  Eigen::MatrixXd noise;   // watts, users x channels
  std::vector<std::vector<Channel>> vacant;
  std::optional<double> interference_range;
};

struct PowerInstance {
  Eigen::VectorXd h;
  Eigen::MatrixXd g;
  Eigen::VectorXd noise;
  Eigen::VectorXd cost;
};

struct AccessInstance {
  IndexSets out_interference;
  Eigen::VectorXd z;
  Eigen::VectorXd cost;
};

struct ChainSpec {
  std::optional<std::uint64_t> max_events = 10000;
  std::optional<double> max_time;
  std::vector<double> tau;
  double allowed_loss = 0.2;
  std::size_t dwell = 100;
};

struct SweepSpec {
  std::string variable;  // p_link | detection_range | n_users | w
  std::vector<double> values;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSpectrumChain;
  std::uint64_t seed = 1;
  std::size_t replications = 1;
  ScenarioParams spectrum;
  std::optional<SpectrumInstance> spectrum_instance;
  PowerScenarioParams power;
  std::optional<PowerInstance> power_instance;
  AccessScenarioParams access;
  std::optional<AccessInstance> access_instance;
  SocialSpec social;
  std::vector<double> theta = {1.0};
  ChainSpec chain;
  SweepSpec sweep;
  std::size_t cap = ProfileSpace::kDefaultCap;
  // Fallback chain run when the profile space exceeds cap.
  std::uint64_t fallback_events = 200000;
  double fallback_theta_scale = 1e3;
  // Exact mixing measurements only up to this many states.
  std::size_t mixing_state_limit = 256;
  double epsilon = 0.01;
};

// Parses a config, or a manifest written by write_outputs (its "config"
// member is used). Unknown keys are errors. Relative edge-list paths are
// resolved against base_dir. Throws ValidationError.
ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Full config with every default filled in, as JSON text.
std::string config_json(const ExperimentConfig& cfg);

// Throws ValidationError on inconsistent settings.
void validate(const ExperimentConfig& cfg);

struct OutputFile {
  std::string name;
  std::vector<std::string> columns;
  std::string content;
};

struct ExperimentResult {
  std::vector<OutputFile> files;
  std::vector<std::string> warnings;
};

// Deterministic given cfg; replications run on up to `threads` workers
// (0 means hardware concurrency) and are reduced in index order.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                unsigned threads = 0);

std::string manifest_json(const ExperimentConfig& cfg,
                          const ExperimentResult& result);

// Writes every CSV and manifest.json into dir, creating it if needed.
void write_outputs(const std::filesystem::path& dir,
                   const ExperimentConfig& cfg, const ExperimentResult& result);

// Keeps ties whose endpoints are at most `range` metres apart.
SocialGraph social_detection_filter(const SocialGraph& g,
                                    const std::vector<Eigen::Vector2d>& positions,
                                    double range);

struct SweepRow {
  double x = 0.0;
  std::string benchmark;
  double mean = 0.0;
  double stddev = 0.0;
  double normalized = 0.0;
  std::size_t replications = 0;
};

// Columns x,benchmark,mean,std,normalized,replications.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sgum

#endif  // SGUM_EXPERIMENT_HPP_
