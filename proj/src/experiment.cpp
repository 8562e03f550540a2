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

#include "sgum/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <thread>
#include <type_traits>

#include <json.hpp>

#include "sgum/equilibrium.hpp"
#include "sgum/errors.hpp"
#include "sgum/exact_chain.hpp"
#include "sgum/glauber.hpp"
#include "sgum/random.hpp"

namespace sgum {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kPowerTolerance = 1e-10;
constexpr std::size_t kPowerMaxRounds = 100000;

// ---------------------------------------------------------------------------
// Formatting

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

std::string join(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (k) out += ',';
    out += cols[k];
  }
  return out;
}

std::string csv_header(const std::vector<std::string>& cols) {
  return join(cols) + '\n';
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

// ---------------------------------------------------------------------------
// JSON reading

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError("config " + where + ": " + what);
}

void check_keys(const Json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

double read_double(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

std::uint64_t read_uint(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  fail(where, "expected a non-negative integer");
}

void read_opt(const Json& j, const char* key, double& out,
              const std::string& where) {
  if (j.contains(key)) out = read_double(j.at(key), where + "." + key);
}

template <typename U>
  requires std::is_unsigned_v<U>
void read_opt(const Json& j, const char* key, U& out,
              const std::string& where) {
  if (j.contains(key)) {
    out = static_cast<U>(read_uint(j.at(key), where + "." + key));
  }
}

std::optional<double> read_nullable(const Json& j, const char* key,
                                    const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_double(j.at(key), where + "." + key);
}

std::vector<double> read_doubles(const Json& j, const std::string& where) {
  if (j.is_number()) return {read_double(j, where)};
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(read_double(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Eigen::VectorXd read_vector(const Json& j, const std::string& where) {
  const std::vector<double> v = read_doubles(j, where);
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd read_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row =
        read_vector(j[static_cast<std::size_t>(r)],
                    where + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) fail(where, "ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

std::vector<std::vector<std::size_t>> read_index_sets(const Json& j,
                                                      const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of index arrays");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string w = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) fail(w, "expected an array of indices");
    std::vector<std::size_t> set;
    for (std::size_t k = 0; k < j[r].size(); ++k) {
      set.push_back(static_cast<std::size_t>(
          read_uint(j[r][k], w + "[" + std::to_string(k) + "]")));
    }
    out.push_back(std::move(set));
  }
  return out;
}

void parse_spectrum(const Json& j, ExperimentConfig& cfg) {
  const std::string where = "scenario";
  if (j.contains("positions")) {
    check_keys(j, where,
               {"positions", "powers_w", "alpha", "noise_w", "vacant",
                "interference_range"});
    SpectrumInstance inst;
    const Eigen::MatrixXd pos = read_matrix(j.at("positions"), "positions");
    if (pos.cols() != 2) fail("scenario.positions", "need [x, y] pairs");
    for (Eigen::Index r = 0; r < pos.rows(); ++r) {
      inst.positions.emplace_back(pos(r, 0), pos(r, 1));
    }
    if (!j.contains("powers_w") || !j.contains("noise_w") ||
        !j.contains("vacant")) {
      fail(where, "explicit scenario needs powers_w, noise_w and vacant");
    }
    inst.powers = read_vector(j.at("powers_w"), "scenario.powers_w");
    read_opt(j, "alpha", inst.alpha, where);
    inst.noise = read_matrix(j.at("noise_w"), "scenario.noise_w");
    for (const auto& set : read_index_sets(j.at("vacant"), "scenario.vacant")) {
      std::vector<Channel> chans;
      for (std::size_t c : set) chans.push_back(static_cast<Channel>(c));
      inst.vacant.push_back(std::move(chans));
    }
    inst.interference_range = read_nullable(j, "interference_range", where);
    cfg.spectrum_instance = std::move(inst);
    return;
  }
  check_keys(j, where,
             {"n_users", "n_channels", "side", "power_dbm", "alpha",
              "noise_dbm_lo", "noise_dbm_hi", "vacant_min", "vacant_max",
              "interference_range"});
  ScenarioParams& p = cfg.spectrum;
  read_opt(j, "n_users", p.n_users, where);
  read_opt(j, "n_channels", p.n_channels, where);
  read_opt(j, "side", p.side, where);
  read_opt(j, "power_dbm", p.power_dbm, where);
  read_opt(j, "alpha", p.alpha, where);
  read_opt(j, "noise_dbm_lo", p.noise_dbm_lo, where);
  read_opt(j, "noise_dbm_hi", p.noise_dbm_hi, where);
  read_opt(j, "vacant_min", p.vacant_min, where);
  read_opt(j, "vacant_max", p.vacant_max, where);
  p.interference_range = read_nullable(j, "interference_range", where);
}

void parse_power(const Json& j, ExperimentConfig& cfg) {
  const std::string where = "scenario";
  if (j.contains("h")) {
    check_keys(j, where, {"h", "g", "noise", "cost"});
    if (!j.contains("g") || !j.contains("noise") || !j.contains("cost")) {
      fail(where, "explicit power scenario needs h, g, noise and cost");
    }
    PowerInstance inst;
    inst.h = read_vector(j.at("h"), "scenario.h");
    inst.g = read_matrix(j.at("g"), "scenario.g");
    inst.noise = read_vector(j.at("noise"), "scenario.noise");
    inst.cost = read_vector(j.at("cost"), "scenario.cost");
    cfg.power_instance = std::move(inst);
    return;
  }
  check_keys(j, where,
             {"n_users", "side", "link_length", "alpha", "noise", "cost_lo",
              "cost_hi"});
  PowerScenarioParams& p = cfg.power;
  read_opt(j, "n_users", p.n_users, where);
  read_opt(j, "side", p.side, where);
  read_opt(j, "link_length", p.link_length, where);
  read_opt(j, "alpha", p.alpha, where);
  read_opt(j, "noise", p.noise, where);
  read_opt(j, "cost_lo", p.cost_lo, where);
  read_opt(j, "cost_hi", p.cost_hi, where);
}

void parse_access(const Json& j, ExperimentConfig& cfg) {
  const std::string where = "scenario";
  if (j.contains("out_interference")) {
    check_keys(j, where, {"out_interference", "z", "cost"});
    if (!j.contains("z") || !j.contains("cost")) {
      fail(where, "explicit access scenario needs out_interference, z, cost");
    }
    AccessInstance inst;
    inst.out_interference =
        read_index_sets(j.at("out_interference"), "scenario.out_interference");
    inst.z = read_vector(j.at("z"), "scenario.z");
    inst.cost = read_vector(j.at("cost"), "scenario.cost");
    cfg.access_instance = std::move(inst);
    return;
  }
  check_keys(j, where,
             {"n_users", "side", "link_length", "interference_range", "z",
              "cost_lo", "cost_hi"});
  AccessScenarioParams& p = cfg.access;
  read_opt(j, "n_users", p.n_users, where);
  read_opt(j, "side", p.side, where);
  read_opt(j, "link_length", p.link_length, where);
  read_opt(j, "interference_range", p.interference_range, where);
  read_opt(j, "z", p.z, where);
  read_opt(j, "cost_lo", p.cost_lo, where);
  read_opt(j, "cost_hi", p.cost_hi, where);
}

bool is_spectrum(ExperimentKind k) {
  return k == ExperimentKind::kSpectrumChain ||
         k == ExperimentKind::kSpectrumSweep ||
         k == ExperimentKind::kThetaTradeoff ||
         k == ExperimentKind::kStationary;
}

std::vector<double> tenths() {
  std::vector<double> v;
  for (int k = 0; k <= 10; ++k) v.push_back(k / 10.0);
  return v;
}

// ---------------------------------------------------------------------------
// JSON writing

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Json mat_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    a.push_back(vec_json(m.row(r).transpose()));
  }
  return a;
}

Json nullable(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = to_string(cfg.kind);
  j["seed"] = cfg.seed;
  j["replications"] = cfg.replications;
  Json sc;
  if (is_spectrum(cfg.kind)) {
    if (cfg.spectrum_instance) {
      const auto& in = *cfg.spectrum_instance;
      Json pos = Json::array();
      for (const auto& p : in.positions) pos.push_back({p.x(), p.y()});
      sc["positions"] = pos;
      sc["powers_w"] = vec_json(in.powers);
      sc["alpha"] = in.alpha;
      sc["noise_w"] = mat_json(in.noise);
      sc["vacant"] = in.vacant;
      sc["interference_range"] = nullable(in.interference_range);
    } else {
      const auto& p = cfg.spectrum;
      sc["n_users"] = p.n_users;
      sc["n_channels"] = p.n_channels;
      sc["side"] = p.side;
      sc["power_dbm"] = p.power_dbm;
      sc["alpha"] = p.alpha;
      sc["noise_dbm_lo"] = p.noise_dbm_lo;
      sc["noise_dbm_hi"] = p.noise_dbm_hi;
      sc["vacant_min"] = p.vacant_min;
      sc["vacant_max"] = p.vacant_max;
      sc["interference_range"] = nullable(p.interference_range);
    }
  } else if (cfg.kind == ExperimentKind::kPowerSweep) {
    if (cfg.power_instance) {
      const auto& in = *cfg.power_instance;
      sc["h"] = vec_json(in.h);
      sc["g"] = mat_json(in.g);
      sc["noise"] = vec_json(in.noise);
      sc["cost"] = vec_json(in.cost);
    } else {
      const auto& p = cfg.power;
      sc["n_users"] = p.n_users;
      sc["side"] = p.side;
      sc["link_length"] = p.link_length;
      sc["alpha"] = p.alpha;
      sc["noise"] = p.noise;
      sc["cost_lo"] = p.cost_lo;
      sc["cost_hi"] = p.cost_hi;
    }
  } else {
    if (cfg.access_instance) {
      const auto& in = *cfg.access_instance;
      sc["out_interference"] = in.out_interference;
      sc["z"] = vec_json(in.z);
      sc["cost"] = vec_json(in.cost);
    } else {
      const auto& p = cfg.access;
      sc["n_users"] = p.n_users;
      sc["side"] = p.side;
      sc["link_length"] = p.link_length;
      sc["interference_range"] = p.interference_range;
      sc["z"] = p.z;
      sc["cost_lo"] = p.cost_lo;
      sc["cost_hi"] = p.cost_hi;
    }
  }
  j["scenario"] = sc;
  Json so;
  so["kind"] = cfg.social.kind;
  so["p_link"] = cfg.social.p_link;
  so["weight"] = cfg.social.weight;
  so["path"] = cfg.social.path;
  so["symmetrize"] = cfg.social.symmetrize;
  so["detection_range"] = nullable(cfg.social.detection_range);
  j["social"] = so;
  j["theta"] = cfg.theta;
  Json ch;
  ch["max_events"] =
      cfg.chain.max_events ? Json(*cfg.chain.max_events) : Json(nullptr);
  ch["max_time"] = nullable(cfg.chain.max_time);
  ch["tau"] = cfg.chain.tau;
  ch["allowed_loss"] = cfg.chain.allowed_loss;
  ch["dwell"] = cfg.chain.dwell;
  j["chain"] = ch;
  j["sweep"] = {{"variable", cfg.sweep.variable},
                {"values", cfg.sweep.values}};
  j["cap"] = cfg.cap;
  j["fallback_events"] = cfg.fallback_events;
  j["fallback_theta_scale"] = cfg.fallback_theta_scale;
  j["mixing_state_limit"] = cfg.mixing_state_limit;
  j["epsilon"] = cfg.epsilon;
  return j;
}

// ---------------------------------------------------------------------------
// Instances

SpectrumScenario make_spectrum(const ExperimentConfig& cfg, std::uint64_t seed,
                               std::optional<std::size_t> n_users = {}) {
  if (cfg.spectrum_instance) {
    const auto& in = *cfg.spectrum_instance;
    return SpectrumScenario(in.positions, in.powers, in.alpha, in.noise,
                            in.vacant, in.interference_range);
  }
  ScenarioParams p = cfg.spectrum;
  if (n_users) p.n_users = *n_users;
  return random_scenario(p, seed);
}

SocialGraph make_graph(const SocialSpec& spec, std::size_t n,
                       const std::vector<Eigen::Vector2d>* positions,
                       std::uint64_t seed,
                       std::optional<double> p_override = {},
                       std::optional<double> w_override = {}) {
  const double w = w_override.value_or(spec.weight);
  SocialGraph g = empty_graph(n);
  if (spec.kind == "complete") {
    if (w != 0.0) g = complete_graph(n, w);
  } else if (spec.kind == "er") {
    if (w != 0.0) g = er_graph(n, p_override.value_or(spec.p_link), w, seed);
  } else if (spec.kind == "edge-list") {
    EdgeListOptions opts;
    opts.symmetrize = spec.symmetrize;
    opts.n_users = n;
    g = load_edge_list_file(spec.path, opts);
  }
  if (spec.detection_range && positions) {
    g = social_detection_filter(g, *positions, *spec.detection_range);
  }
  return g;
}

PowerScenario make_power(const ExperimentConfig& cfg, const SocialGraph& g,
                         std::uint64_t seed) {
  if (cfg.power_instance) {
    const auto& in = *cfg.power_instance;
    return PowerScenario(in.h, in.g, in.noise, in.cost, g);
  }
  return random_power_scenario(cfg.power, g, seed);
}

RandomAccessScenario make_access(const ExperimentConfig& cfg,
                                 const SocialGraph& g, std::uint64_t seed) {
  if (cfg.access_instance) {
    const auto& in = *cfg.access_instance;
    return RandomAccessScenario(in.out_interference, in.z, in.cost, g);
  }
  return random_access_scenario(cfg.access, g, seed);
}

std::size_t user_count(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::kPowerSweep:
      return cfg.power_instance
                 ? static_cast<std::size_t>(cfg.power_instance->h.size())
                 : cfg.power.n_users;
    case ExperimentKind::kRandomAccessSweep:
      return cfg.access_instance ? cfg.access_instance->out_interference.size()
                                 : cfg.access.n_users;
    default:
      return cfg.spectrum_instance ? cfg.spectrum_instance->positions.size()
                                   : cfg.spectrum.n_users;
  }
}

ChainConfig chain_config(const ExperimentConfig& cfg, double theta,
                         std::uint64_t seed) {
  ChainConfig cc;
  cc.theta = theta;
  if (!cfg.chain.tau.empty()) {
    cc.tau = Eigen::Map<const Eigen::VectorXd>(
        cfg.chain.tau.data(), static_cast<Eigen::Index>(cfg.chain.tau.size()));
  }
  cc.horizon.max_events = cfg.chain.max_events;
  cc.horizon.max_time = cfg.chain.max_time;
  cc.seed = seed;
  return cc;
}

// ---------------------------------------------------------------------------
// Parallel replications

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentResult run_chain(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t reps = cfg.replications;
  std::vector<std::string> body(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(cfg.seed, r);
    const SpectrumScenario s = make_spectrum(cfg, derive_seed(rs, 0));
    const SocialGraph g = make_graph(cfg.social, s.n_users(), &s.positions(),
                                     derive_seed(rs, 1));
    Rng init(derive_seed(rs, 3));
    const ChannelProfile a0 = random_profile(s, init);
    std::string out;
    for (double theta : cfg.theta) {
      const ChainTrace trace =
          simulate(s, g, chain_config(cfg, theta, derive_seed(rs, 2)), a0);
      const std::string csv = trace_csv(trace);
      const std::string prefix = std::to_string(r) + ',' + fmt(theta) + ',';
      std::size_t pos = csv.find('\n') + 1;
      while (pos < csv.size()) {
        const std::size_t nl = csv.find('\n', pos);
        out += prefix;
        out.append(csv, pos, nl - pos + 1);
        pos = nl + 1;
      }
    }
    body[r] = std::move(out);
  });
  OutputFile f{"spectrum_chain.csv",
               {"replication", "theta", "time", "user", "old", "new",
                "accepted", "phi", "welfare"},
               {}};
  f.content = csv_header(f.columns);
  for (const auto& b : body) f.content += b;
  return {{std::move(f)}, {}};
}

ExperimentResult run_sweep(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t reps = cfg.replications;
  const auto& xs = cfg.sweep.values;
  const std::string& var = cfg.sweep.variable;
  // [replication][x] -> {ncg, sgum, num} total interference.
  std::vector<std::vector<std::array<double, 3>>> vals(
      reps, std::vector<std::array<double, 3>>(xs.size()));
  std::vector<char> approx(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(cfg.seed, r);
    BenchmarkOptions bo;
    bo.cap = cfg.cap;
    bo.fallback_events = cfg.fallback_events;
    bo.fallback_theta_scale = cfg.fallback_theta_scale;
    bo.seed = derive_seed(rs, 2);
    auto one = [&](const SpectrumScenario& s, const SocialGraph& g) {
      const BenchmarkProfiles b = benchmark_profiles(s, g, bo);
      if (b.approximate) approx[r] = 1;
      return std::array<double, 3>{-welfare(s, b.ncg_sne),
                                   -welfare(s, b.sgum_sne),
                                   -welfare(s, b.num_opt)};
    };
    if (var == "n_users") {
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const auto n = static_cast<std::size_t>(xs[k]);
        const SpectrumScenario s = make_spectrum(cfg, derive_seed(rs, 0), n);
        const SocialGraph g =
            make_graph(cfg.social, n, &s.positions(), derive_seed(rs, 1));
        vals[r][k] = one(s, g);
      }
      return;
    }
    const SpectrumScenario s = make_spectrum(cfg, derive_seed(rs, 0));
    const std::size_t n = s.n_users();
    SocialSpec spec = cfg.social;
    std::optional<SocialGraph> base;
    if (var == "detection_range") {
      spec.detection_range.reset();
      base = make_graph(spec, n, nullptr, derive_seed(rs, 1));
    }
    for (std::size_t k = 0; k < xs.size(); ++k) {
      SocialGraph g = empty_graph(n);
      if (var == "p_link") {
        g = make_graph(spec, n, &s.positions(), derive_seed(rs, 1), xs[k]);
      } else {
        g = social_detection_filter(*base, s.positions(), xs[k]);
      }
      if (k == 0 || !std::isfinite(vals[r][0][0])) {
        vals[r][k] = one(s, g);
      } else {
        // NCG and NUM do not depend on the graph.
        const BenchmarkProfiles b = benchmark_profiles(s, g, bo);
        if (b.approximate) approx[r] = 1;
        vals[r][k] = {vals[r][0][0], -welfare(s, b.sgum_sne), vals[r][0][2]};
      }
    }
  });
  static const char* kNames[3] = {"NCG", "SGUM", "NUM"};
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::array<std::pair<double, double>, 3> stats;
    for (int b = 0; b < 3; ++b) {
      std::vector<double> v;
      for (std::size_t r = 0; r < reps; ++r) v.push_back(vals[r][k][b]);
      stats[b] = mean_std(v);
    }
    for (int b = 0; b < 3; ++b) {
      rows.push_back({xs[k], kNames[b], stats[b].first, stats[b].second,
                      stats[b].first / stats[2].first, reps});
    }
  }
  ExperimentResult res;
  res.files.push_back({"spectrum_sweep.csv",
                       {"x", "benchmark", "mean", "std", "normalized",
                        "replications"},
                       sweep_csv(rows)});
  const auto n_approx = std::count(approx.begin(), approx.end(), 1);
  if (n_approx > 0) {
    res.warnings.push_back(
        std::to_string(n_approx) +
        " replication(s) exceeded the enumeration cap; benchmark profiles "
        "come from a long chain run and are approximate");
  }
  return res;
}

ExperimentResult run_tradeoff(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t reps = cfg.replications;
  const std::size_t nt = cfg.theta.size();
  // [replication][theta] -> {phi_theta, first_hit, convergence, exact}.
  std::vector<std::vector<std::array<double, 4>>> vals(
      reps, std::vector<std::array<double, 4>>(nt));
  std::vector<char> exact(reps, 1);
  std::vector<std::size_t> censored(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(cfg.seed, r);
    const SpectrumScenario s = make_spectrum(cfg, derive_seed(rs, 0));
    const SocialGraph g = make_graph(cfg.social, s.n_users(), &s.positions(),
                                     derive_seed(rs, 1));
    Rng init(derive_seed(rs, 3));
    const ChannelProfile a0 = random_profile(s, init);
    std::vector<ChainTrace> traces;
    for (double theta : cfg.theta) {
      ChainConfig cc = chain_config(cfg, theta, derive_seed(rs, 2));
      traces.push_back(simulate(s, g, cc, a0));
    }
    double phi_star = 0.0;
    try {
      phi_star = brute_force_optima(s, g, cfg.cap).phi_star;
    } catch (const CapacityError&) {
      exact[r] = 0;
      phi_star = -std::numeric_limits<double>::infinity();
      for (const auto& t : traces) {
        phi_star = std::max(phi_star, t.initial_phi);
        for (const auto& e : t.events) phi_star = std::max(phi_star, e.phi);
      }
    }
    for (std::size_t k = 0; k < nt; ++k) {
      const ChainTrace& t = traces[k];
      double phi_theta = std::numeric_limits<double>::quiet_NaN();
      if (exact[r]) {
        const ExactChain ch = exact_chain(s, g, cfg.theta[k], {}, cfg.cap);
        phi_theta = expected_potential(ch);
      }
      auto events = [&](double loss, std::size_t dwell) {
        const auto hit = events_to_convergence(t, phi_star, loss, dwell);
        if (!hit) {
          ++censored[r];
          return static_cast<double>(t.n_events);
        }
        return static_cast<double>(hit->events);
      };
      vals[r][k] = {phi_theta, events(0.0, 0),
                    events(cfg.chain.allowed_loss, cfg.chain.dwell),
                    events(0.0, cfg.chain.dwell)};
    }
  });
  static const char* kMetrics[4] = {"phi_theta", "first_hit_events",
                                    "convergence_events",
                                    "convergence_events_exact"};
  const bool all_exact = std::all_of(exact.begin(), exact.end(),
                                     [](char c) { return c != 0; });
  std::string csv = csv_header({"theta", "metric", "mean", "std",
                                "replications"});
  for (std::size_t k = 0; k < nt; ++k) {
    for (int m = 0; m < 4; ++m) {
      if (m == 0 && !all_exact) continue;
      std::vector<double> v;
      for (std::size_t r = 0; r < reps; ++r) v.push_back(vals[r][k][m]);
      const auto [mean, sd] = mean_std(v);
      csv += fmt(cfg.theta[k]) + ',' + kMetrics[m] + ',' + fmt(mean) + ',' +
             fmt(sd) + ',' + std::to_string(reps) + '\n';
    }
  }
  ExperimentResult res;
  res.files.push_back({"theta_tradeoff.csv",
                       {"theta", "metric", "mean", "std", "replications"},
                       std::move(csv)});
  res.warnings.push_back(
      "convergence: first event after which the running potential stays "
      "within allowed_loss of the maximum for dwell consecutive events");
  if (!all_exact) {
    res.warnings.push_back(
        "profile space exceeds cap: the maximum potential is the best value "
        "seen across runs and phi_theta rows are omitted");
  }
  std::size_t total_censored = 0;
  for (auto c : censored) total_censored += c;
  if (total_censored > 0) {
    res.warnings.push_back(std::to_string(total_censored) +
                           " convergence measurement(s) censored at the "
                           "horizon and reported as the horizon event count");
  }
  return res;
}

// Time fraction spent in each visited profile, up to the last event.
using Occupancy = std::map<ChannelProfile, double>;

Occupancy occupancy(const ChainTrace& t) {
  Occupancy occ;
  ChannelProfile a = t.initial;
  double last = 0.0;
  for (const ChainEvent& e : t.events) {
    occ[a] += e.time - last;
    last = e.time;
    if (e.accepted) a[e.user] = e.new_channel;
  }
  if (!(last > 0.0)) return {{t.initial, 1.0}};
  for (auto& [profile, mass] : occ) mass /= last;
  return occ;
}

ExperimentResult run_stationary(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t reps = cfg.replications;
  std::vector<std::string> laws(reps);
  std::vector<std::string> summaries(reps);
  std::vector<char> fallback(reps, 0);
  std::vector<std::size_t> unresolved(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(cfg.seed, r);
    const SpectrumScenario s = make_spectrum(cfg, derive_seed(rs, 0));
    const SocialGraph g = make_graph(cfg.social, s.n_users(), &s.positions(),
                                     derive_seed(rs, 1));
    Eigen::VectorXd tau;
    if (!cfg.chain.tau.empty()) {
      tau = Eigen::Map<const Eigen::VectorXd>(
          cfg.chain.tau.data(), static_cast<Eigen::Index>(cfg.chain.tau.size()));
    }
    const double log_m = log_strategy_count(s);
    const double structural = structural_gap_bound(s, g);
    const std::string rep = std::to_string(r) + ',';
    if (profile_space_size(s) > cfg.cap) {
      fallback[r] = 1;
      Rng init(derive_seed(rs, 3));
      const ChannelProfile a0 = random_profile(s, init);
      for (double theta : cfg.theta) {
        ChainConfig cc = chain_config(cfg, theta, derive_seed(rs, 2));
        cc.horizon = {std::nullopt, cfg.fallback_events};
        const ChainTrace t = simulate(s, g, cc, a0);
        const Occupancy occ = occupancy(t);
        const std::string prefix = rep + fmt(theta) + ',';
        double phi_theta = 0.0;
        double v_theta = 0.0;
        for (const auto& [a, p] : occ) {
          const double phi = potential(s, g, a).total();
          const double v = welfare(s, a);
          phi_theta += p * phi;
          v_theta += p * v;
          laws[r] += prefix + a.to_string() + ',' + fmt(p) + ',' + fmt(phi) +
                     ',' + fmt(v) + '\n';
        }
        const double entropy = log_m / theta;
        summaries[r] += prefix + ',' + fmt(phi_theta) + ',' + fmt(entropy) +
                        ",," + fmt(v_theta) + ",," +
                        fmt(entropy + structural) + ",,,,,,\n";
      }
      return;
    }
    const Optima opt = brute_force_optima(s, g, cfg.cap);
    const MixingInputs mi = mixing_inputs(s, g, tau, cfg.cap);
    for (double theta : cfg.theta) {
      const ExactChain ch = exact_chain(s, g, theta, tau, cfg.cap);
      const std::string prefix = rep + fmt(theta) + ',';
      for (std::size_t k = 0; k < ch.space.size(); ++k) {
        const auto e = static_cast<Eigen::Index>(k);
        laws[r] += prefix + ch.space.profile(k).to_string() + ',' +
                   fmt(ch.stationary(e)) + ',' + fmt(ch.potential(e)) + ',' +
                   fmt(ch.welfare(e)) + '\n';
      }
      const MixingBounds mb = mixing_bounds(mi, theta, cfg.epsilon);
      const double entropy = log_m / theta;
      const double rho =
          ch.stationary.dot((opt.v_bar - ch.welfare.array()).matrix());
      std::string measured;
      std::string lambda2;
      std::string cheeger;
      if (ch.space.size() <= cfg.mixing_state_limit) {
        try {
          measured = fmt(measured_mixing_time(ch, cfg.epsilon));
        } catch (const DomainError&) {
          ++unresolved[r];
        }
        const SpectralCheck sc = spectral_check(ch);
        lambda2 = fmt(sc.lambda2);
        cheeger = sc.cheeger_ok ? "1" : "0";
      }
      summaries[r] += prefix + fmt(opt.phi_star) + ',' +
                      fmt(expected_potential(ch)) + ',' + fmt(entropy) + ',' +
                      fmt(opt.v_bar) + ',' + fmt(expected_welfare(ch)) + ',' +
                      fmt(rho) + ',' + fmt(entropy + structural) + ',' +
                      fmt(mb.theta_th) + ',' + fmt(mb.general_bound) + ',' +
                      (mb.coupled_bound ? fmt(*mb.coupled_bound) : "") + ',' +
                      measured + ',' + lambda2 + ',' + cheeger + '\n';
    }
  });
  ExperimentResult res;
  OutputFile law{"stationary.csv",
                 {"replication", "theta", "profile", "probability", "phi",
                  "welfare"},
                 {}};
  law.content = csv_header(law.columns);
  for (const auto& l : laws) law.content += l;
  OutputFile sum{"stationary_summary.csv",
                 {"replication", "theta", "phi_star", "phi_theta",
                  "theorem4_bound", "v_bar", "v_theta", "rho_theta",
                  "theorem5_bound", "theta_th", "general_bound",
                  "coupled_bound", "measured_mixing", "lambda2", "cheeger_ok"},
                 {}};
  sum.content = csv_header(sum.columns);
  for (const auto& l : summaries) sum.content += l;
  res.files.push_back(std::move(law));
  res.files.push_back(std::move(sum));
  std::size_t n_unresolved = 0;
  for (auto u : unresolved) n_unresolved += u;
  if (n_unresolved > 0) {
    res.warnings.push_back(
        std::to_string(n_unresolved) +
        " mixing time(s) too long to resolve numerically; measured_mixing is "
        "blank there");
  }
  const auto n_fallback = std::count(fallback.begin(), fallback.end(), 1);
  if (n_fallback > 0) {
    res.warnings.push_back(
        std::to_string(n_fallback) +
        " replication(s) exceeded the enumeration cap; their stationary law "
        "is the time occupancy of a fallback_events chain run and exact-only "
        "columns are blank");
  }
  return res;
}

ExperimentResult run_power(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t reps = cfg.replications;
  const std::size_t n = user_count(cfg);
  std::vector<std::string> body(reps);
  std::vector<char> unconverged(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(cfg.seed, r);
    for (double w : cfg.sweep.values) {
      const SocialGraph g =
          make_graph(cfg.social, n, nullptr, derive_seed(rs, 1), {}, w);
      const PowerScenario sc = make_power(cfg, g, derive_seed(rs, 0));
      Eigen::VectorXd p;
      Eigen::VectorXd so(static_cast<Eigen::Index>(n));
      bool converged = true;
      if (n == 2) {
        p = two_user_sne(sc);
        for (std::size_t i = 0; i < n; ++i) {
          so(static_cast<Eigen::Index>(i)) = social_optimal_power(sc, i);
        }
      } else {
        const IterativeSolution sol =
            solve_sne_iterative(sc, kPowerTolerance, kPowerMaxRounds);
        p = sol.profile;
        // With every tie at 1 each S_i is the welfare, so the same
        // iteration is coordinate ascent on V.
        const PowerScenario full =
            make_power(cfg, complete_graph(n, 1.0), derive_seed(rs, 0));
        const IterativeSolution ascent =
            solve_sne_iterative(full, kPowerTolerance, kPowerMaxRounds);
        so = ascent.profile;
        converged = sol.converged && ascent.converged;
        if (!converged) unconverged[r] = 1;
      }
      const double v = power_welfare(sc, p);
      for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        body[r] += std::to_string(r) + ',' + fmt(w) + ',' +
                   std::to_string(i) + ',' + fmt(p(e)) + ',' + fmt(so(e)) +
                   ',' + fmt(v) + ',' + (converged ? "1" : "0") + '\n';
      }
    }
  });
  OutputFile f{"power_sweep.csv",
               {"replication", "w", "user", "p_sne", "p_so", "welfare_sne",
                "converged"},
               {}};
  f.content = csv_header(f.columns);
  for (const auto& b : body) f.content += b;
  ExperimentResult res{{std::move(f)}, {}};
  if (n != 2) {
    res.warnings.push_back(
        "p_so for more than two users is a heuristic: coordinate ascent on "
        "welfare from the zero profile, a stationary point only");
  }
  if (std::count(unconverged.begin(), unconverged.end(), 1) > 0) {
    res.warnings.push_back("best-response iteration hit the round limit");
  }
  return res;
}

ExperimentResult run_access(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t reps = cfg.replications;
  const std::size_t n = user_count(cfg);
  std::vector<std::string> body(reps);
  std::vector<char> undefined(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(cfg.seed, r);
    for (double w : cfg.sweep.values) {
      const SocialGraph g =
          make_graph(cfg.social, n, nullptr, derive_seed(rs, 1), {}, w);
      const RandomAccessScenario sc = make_access(cfg, g, derive_seed(rs, 0));
      const Eigen::VectorXd q = sne_access_profile(sc);
      const Eigen::VectorXd qo = social_optimal_access_profile(sc);
      const auto v = try_access_welfare(sc, q);
      const auto vo = try_access_welfare(sc, qo);
      if (!v || !vo) undefined[r] = 1;
      const std::string vs = v ? fmt(*v) : "-inf";
      const std::string vos = vo ? fmt(*vo) : "-inf";
      for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        body[r] += std::to_string(r) + ',' + fmt(w) + ',' +
                   std::to_string(i) + ',' + fmt(q(e)) + ',' + fmt(qo(e)) +
                   ',' + vs + ',' + vos + '\n';
      }
    }
  });
  OutputFile f{"random_access_sweep.csv",
               {"replication", "w", "user", "q_sne", "q_so", "welfare_sne",
                "welfare_so"},
               {}};
  f.content = csv_header(f.columns);
  for (const auto& b : body) f.content += b;
  ExperimentResult res{{std::move(f)}, {}};
  if (std::count(undefined.begin(), undefined.end(), 1) > 0) {
    res.warnings.push_back(
        "some profiles give a link zero success probability; their welfare "
        "is written as -inf");
  }
  return res;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSpectrumChain: return "spectrum-chain";
    case ExperimentKind::kSpectrumSweep: return "spectrum-sweep-PL";
    case ExperimentKind::kThetaTradeoff: return "spectrum-theta-tradeoff";
    case ExperimentKind::kPowerSweep: return "power-sweep";
    case ExperimentKind::kRandomAccessSweep: return "random-access-sweep";
    case ExperimentKind::kStationary: return "stationary-analysis";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::kSpectrumChain, ExperimentKind::kSpectrumSweep,
                 ExperimentKind::kThetaTradeoff, ExperimentKind::kPowerSweep,
                 ExperimentKind::kRandomAccessSweep,
                 ExperimentKind::kStationary}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown experiment kind '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("outputs")) {
    doc = doc.at("config");
  }
  check_keys(doc, "root",
             {"experiment", "seed", "replications", "scenario", "social",
              "theta", "chain", "sweep", "cap", "fallback_events",
              "fallback_theta_scale", "mixing_state_limit", "epsilon"});
  ExperimentConfig cfg;
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    fail("root", "missing string 'experiment'");
  }
  cfg.kind = parse_experiment_kind(doc.at("experiment").get<std::string>());
  read_opt(doc, "seed", cfg.seed, "root");
  read_opt(doc, "replications", cfg.replications, "root");
  read_opt(doc, "cap", cfg.cap, "root");
  read_opt(doc, "fallback_events", cfg.fallback_events, "root");
  read_opt(doc, "fallback_theta_scale", cfg.fallback_theta_scale, "root");
  read_opt(doc, "mixing_state_limit", cfg.mixing_state_limit, "root");
  read_opt(doc, "epsilon", cfg.epsilon, "root");
  const Json empty = Json::object();
  const Json& sc = doc.contains("scenario") ? doc.at("scenario") : empty;
  if (is_spectrum(cfg.kind)) {
    parse_spectrum(sc, cfg);
  } else if (cfg.kind == ExperimentKind::kPowerSweep) {
    parse_power(sc, cfg);
  } else {
    parse_access(sc, cfg);
  }

  const bool game_sweep = cfg.kind == ExperimentKind::kPowerSweep ||
                          cfg.kind == ExperimentKind::kRandomAccessSweep;
  cfg.social.kind = game_sweep ? "complete" : "empty";
  if (cfg.kind == ExperimentKind::kSpectrumSweep) cfg.social.kind = "er";
  if (doc.contains("social")) {
    const Json& so = doc.at("social");
    check_keys(so, "social",
               {"kind", "p_link", "weight", "path", "symmetrize",
                "detection_range"});
    if (so.contains("kind")) {
      if (!so.at("kind").is_string()) fail("social.kind", "expected a string");
      cfg.social.kind = so.at("kind").get<std::string>();
    }
    read_opt(so, "p_link", cfg.social.p_link, "social");
    read_opt(so, "weight", cfg.social.weight, "social");
    if (so.contains("path")) {
      if (!so.at("path").is_string()) fail("social.path", "expected a string");
      cfg.social.path = so.at("path").get<std::string>();
    }
    if (so.contains("symmetrize")) {
      if (!so.at("symmetrize").is_boolean()) {
        fail("social.symmetrize", "expected a boolean");
      }
      cfg.social.symmetrize = so.at("symmetrize").get<bool>();
    }
    cfg.social.detection_range = read_nullable(so, "detection_range", "social");
  }
  if (!cfg.social.path.empty()) {
    std::filesystem::path p(cfg.social.path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.social.path = p.lexically_normal().string();
  }

  if (doc.contains("theta")) cfg.theta = read_doubles(doc.at("theta"), "theta");
  if (doc.contains("chain")) {
    const Json& ch = doc.at("chain");
    check_keys(ch, "chain",
               {"max_events", "max_time", "tau", "allowed_loss", "dwell"});
    if (ch.contains("max_events")) {
      if (ch.at("max_events").is_null()) {
        cfg.chain.max_events.reset();
      } else {
        cfg.chain.max_events = read_uint(ch.at("max_events"), "chain.max_events");
      }
    }
    cfg.chain.max_time = read_nullable(ch, "max_time", "chain");
    if (ch.contains("tau")) cfg.chain.tau = read_doubles(ch.at("tau"), "chain.tau");
    read_opt(ch, "allowed_loss", cfg.chain.allowed_loss, "chain");
    read_opt(ch, "dwell", cfg.chain.dwell, "chain");
  }
  if (cfg.kind == ExperimentKind::kSpectrumSweep) {
    cfg.sweep.variable = "p_link";
  } else if (game_sweep) {
    cfg.sweep.variable = "w";
  }
  if (doc.contains("sweep")) {
    const Json& sw = doc.at("sweep");
    check_keys(sw, "sweep", {"variable", "values"});
    if (sw.contains("variable")) {
      if (!sw.at("variable").is_string()) {
        fail("sweep.variable", "expected a string");
      }
      cfg.sweep.variable = sw.at("variable").get<std::string>();
    }
    if (sw.contains("values")) {
      cfg.sweep.values = read_doubles(sw.at("values"), "sweep.values");
    }
  }
  if (cfg.sweep.values.empty() && !cfg.sweep.variable.empty()) {
    if (cfg.sweep.variable == "p_link" || cfg.sweep.variable == "w") {
      cfg.sweep.values = tenths();
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_json(const ExperimentConfig& cfg) {
  return config_to_json(cfg).dump(2) + '\n';
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) fail("replications", "must be at least 1");
  if (cfg.theta.empty()) fail("theta", "needs at least one value");
  for (double t : cfg.theta) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail("theta", "must be finite and >= 0");
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    fail("epsilon", "must lie in (0, 1/2)");
  }
  if (cfg.chain.allowed_loss < 0.0) fail("chain.allowed_loss", "must be >= 0");
  if (!cfg.chain.max_events && !cfg.chain.max_time) {
    fail("chain", "needs max_events or max_time");
  }
  if (cfg.chain.max_time && !(*cfg.chain.max_time >= 0.0)) {
    fail("chain.max_time", "must be >= 0");
  }
  for (double t : cfg.chain.tau) {
    if (!(t > 0.0)) fail("chain.tau", "rates must be positive");
  }
  if (!cfg.chain.tau.empty() && cfg.chain.tau.size() != user_count(cfg)) {
    fail("chain.tau", "needs one rate per user");
  }
  const auto& so = cfg.social;
  if (so.kind != "er" && so.kind != "complete" && so.kind != "empty" &&
      so.kind != "edge-list") {
    fail("social.kind", "must be er, edge-list, complete or empty");
  }
  if (!(so.p_link >= 0.0 && so.p_link <= 1.0)) {
    fail("social.p_link", "must lie in [0, 1]");
  }
  if (!(so.weight >= 0.0 && so.weight <= 1.0)) {
    fail("social.weight", "must lie in [0, 1]");
  }
  if (so.kind == "edge-list") {
    if (so.path.empty()) fail("social.path", "required for edge-list graphs");
    if (!std::filesystem::exists(so.path)) {
      fail("social.path", "file not found: " + so.path);
    }
  }
  if (so.detection_range && !(*so.detection_range >= 0.0)) {
    fail("social.detection_range", "must be >= 0");
  }
  const std::string& var = cfg.sweep.variable;
  switch (cfg.kind) {
    case ExperimentKind::kSpectrumSweep:
      if (var != "p_link" && var != "detection_range" && var != "n_users") {
        fail("sweep.variable", "must be p_link, detection_range or n_users");
      }
      if (var == "p_link" && so.kind != "er") {
        fail("social.kind", "a p_link sweep needs an er graph");
      }
      if (var == "n_users") {
        if (cfg.spectrum_instance) {
          fail("sweep.variable", "n_users sweeps need a generated scenario");
        }
        if (so.kind == "edge-list") {
          fail("social.kind", "n_users sweeps cannot use a fixed edge list");
        }
        for (double x : cfg.sweep.values) {
          if (!(x >= 1.0) || x != std::floor(x)) {
            fail("sweep.values", "n_users values must be positive integers");
          }
        }
      }
      if (var == "detection_range") {
        for (double x : cfg.sweep.values) {
          if (!(x >= 0.0)) fail("sweep.values", "ranges must be >= 0");
        }
      }
      if (var == "p_link") {
        for (double x : cfg.sweep.values) {
          if (!(x >= 0.0 && x <= 1.0)) {
            fail("sweep.values", "p_link values must lie in [0, 1]");
          }
        }
      }
      if (cfg.sweep.values.empty()) fail("sweep.values", "needs values");
      break;
    case ExperimentKind::kPowerSweep:
    case ExperimentKind::kRandomAccessSweep:
      if (var != "w") fail("sweep.variable", "must be w");
      if (so.kind != "complete" && so.kind != "er") {
        fail("social.kind", "tie-weight sweeps need a complete or er graph");
      }
      if (cfg.sweep.values.empty()) fail("sweep.values", "needs values");
      for (double x : cfg.sweep.values) {
        if (!(x >= 0.0 && x <= 1.0)) {
          fail("sweep.values", "tie weights must lie in [0, 1]");
        }
      }
      break;
    case ExperimentKind::kStationary:
      for (double t : cfg.theta) {
        if (!(t > 0.0)) fail("theta", "stationary analysis needs theta > 0");
      }
      [[fallthrough]];
    default:
      if (!var.empty() || !cfg.sweep.values.empty()) {
        fail("sweep", "only sweep experiments take a sweep");
      }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                unsigned threads) {
  validate(cfg);
  switch (cfg.kind) {
    case ExperimentKind::kSpectrumChain: return run_chain(cfg, threads);
    case ExperimentKind::kSpectrumSweep: return run_sweep(cfg, threads);
    case ExperimentKind::kThetaTradeoff: return run_tradeoff(cfg, threads);
    case ExperimentKind::kPowerSweep: return run_power(cfg, threads);
    case ExperimentKind::kRandomAccessSweep: return run_access(cfg, threads);
    case ExperimentKind::kStationary: return run_stationary(cfg, threads);
  }
  throw ValidationError("unknown experiment kind");
}

std::string manifest_json(const ExperimentConfig& cfg,
                          const ExperimentResult& result) {
  Json m;
  m["tool"] = "sgum";
  m["csv_schema_version"] = kCsvSchemaVersion;
  m["experiment"] = to_string(cfg.kind);
  m["seed_scheme"] =
      "replication r uses rs = derive_seed(seed, r); streams derive_seed(rs, "
      "k) with k = 0 scenario, 1 social graph, 2 chain, 3 initial profile; "
      "derive_seed(s, i) = mix64(mix64(s) ^ (i * 0xd1b54a32d192ed03)), mix64 "
      "is the splitmix64 finalizer; generator mt19937_64";
  m["config"] = config_to_json(cfg);
  Json outs = Json::array();
  for (const auto& f : result.files) {
    const auto rows = std::count(f.content.begin(), f.content.end(), '\n');
    outs.push_back({{"file", f.name},
                    {"columns", f.columns},
                    {"rows", rows > 0 ? rows - 1 : 0}});
  }
  m["outputs"] = outs;
  m["warnings"] = result.warnings;
  return m.dump(2) + '\n';
}

void write_outputs(const std::filesystem::path& dir,
                   const ExperimentConfig& cfg,
                   const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  for (const auto& f : result.files) write(f.name, f.content);
  write("manifest.json", manifest_json(cfg, result));
}

SocialGraph social_detection_filter(const SocialGraph& g,
                                    const std::vector<Eigen::Vector2d>& positions,
                                    double range) {
  if (positions.size() != g.n_users()) {
    throw ValidationError("positions must cover every user");
  }
  std::vector<Tie> kept;
  for (const Tie& t : g.ties()) {
    if ((positions[t.from] - positions[t.to]).norm() <= range) {
      kept.push_back(t);
    }
  }
  return SocialGraph(g.n_users(), std::move(kept), g.mode());
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      csv_header({"x", "benchmark", "mean", "std", "normalized",
                  "replications"});
  for (const auto& r : rows) {
    out += fmt(r.x) + ',' + r.benchmark + ',' + fmt(r.mean) + ',' +
           fmt(r.stddev) + ',' + fmt(r.normalized) + ',' +
           std::to_string(r.replications) + '\n';
  }
  return out;
}

}  // namespace sgum
