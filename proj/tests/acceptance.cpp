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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgum/equilibrium.hpp"
#include "sgum/exact_chain.hpp"
#include "sgum/experiment.hpp"
#include "sgum/glauber.hpp"
#include "sgum/power_control.hpp"
#include "sgum/random.hpp"
#include "sgum/random_access.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace sgum;
using sgum::testing::symmetric_ties;
using sgum::testing::unit_scenario;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::string cli;
  fs::path work;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome potential_identity(const Context&) {
  Stopwatch clock;
  Rng rng(101);
  double worst = 0.0;
  std::size_t deviations = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + uniform_index(rng, 4);
    const std::size_t m = 1 + uniform_index(rng, 4);
    std::optional<double> range;
    if (uniform01(rng) < 0.3) range = uniform(rng, 0.5, 2.0);
    const std::uint64_t seed = rng();
    const SpectrumScenario s = unit_scenario(n, m, seed, false, range);
    const SocialGraph g = symmetric_ties(n, seed, uniform01(rng));
    if (!check_potential_game_conditions(s, g).ok()) {
      return {false, "generated instance " + std::to_string(inst) +
                         " is not compliant"};
    }
    const ProfileSpace space(s);
    for (std::size_t k = 0; k < space.size(); ++k) {
      const ChannelProfile a = space.profile(k);
      const double phi_a = potential(s, g, a).total();
      for (std::size_t u = 0; u < n; ++u) {
        const double s_a = social_group_utility(s, g, a, u);
        ChannelProfile b = a;
        for (Channel c : s.vacant(u)) {
          if (c == a[u]) continue;
          b[u] = c;
          const double ds = social_group_utility(s, g, b, u) - s_a;
          const double dphi = potential(s, g, b).total() - phi_a;
          const double scale = std::max(std::abs(s_a), std::abs(phi_a));
          worst = std::max(worst, std::abs(ds - dphi) / scale);
          ++deviations;
        }
      }
    }
  }
  const double t = clock.seconds();
  return {worst <= 1e-9 && t < 10.0,
          std::to_string(deviations) + " deviations, max rel err " +
              num(worst) + " (tol 1e-9), " + num(t) + " s (limit 10)"};
}

Outcome detailed_balance(const Context&) {
  Rng rng(202);
  double worst_db = 0.0;
  double worst_st = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + uniform_index(rng, 3);
    const std::size_t m = 2 + uniform_index(rng, 3);
    const std::uint64_t seed = rng();
    const SpectrumScenario s = unit_scenario(n, m, seed);
    const SocialGraph g = symmetric_ties(n, seed);
    Eigen::VectorXd tau(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < tau.size(); ++i) tau(i) = uniform(rng, 0.5, 2.0);
    const double theta = std::pow(10.0, uniform(rng, -2.0, 2.0));
    const ExactChain c = exact_chain(s, g, theta, tau);
    worst_db = std::max(worst_db, detailed_balance_residual(c));
    worst_st = std::max(worst_st, stationarity_residual(c) / generator_inf_norm(c));
  }
  return {worst_db <= 1e-9 && worst_st <= 1e-9,
          "50 instances, max detailed-balance residual " + num(worst_db) +
              ", max |q*Q|/|Q| " + num(worst_st) + " (tol 1e-9)"};
}

Outcome chain_correctness(const Context&) {
  Stopwatch clock;
  // Small potential range, so the chain mixes within a few time units.
  const SpectrumScenario s = unit_scenario(3, 2, 7, true);
  const SocialGraph g = symmetric_ties(3, 7);
  const ProfileSpace space(s);
  double worst = 0.0;
  for (double theta : {0.0, 2.0}) {
    const ExactChain exact = exact_chain(s, g, theta);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ChainConfig cfg;
      cfg.theta = theta;
      cfg.seed = seed;
      cfg.horizon.max_events = 1000000;
      const ChainTrace t = simulate(s, g, cfg, space.profile(0));
      worst = std::max(worst, tv_distance(empirical_occupancy(t, space),
                                          exact.stationary));
    }
  }
  const double sec = clock.seconds();
  return {worst <= 0.02 && sec < 30.0,
          "max TV " + num(worst) + " (tol 0.02) over 5 seeds x theta {0, 2}, " +
              num(sec) + " s (limit 30)"};
}

// Enumerable instances shared by criteria 4 and 5.
std::vector<std::pair<SpectrumScenario, SocialGraph>> gap_instances() {
  std::vector<std::pair<SpectrumScenario, SocialGraph>> out;
  Rng rng(404);
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + uniform_index(rng, 3);
    const std::size_t m = 2 + uniform_index(rng, 2);
    const std::uint64_t seed = rng();
    out.emplace_back(unit_scenario(n, m, seed), symmetric_ties(n, seed));
  }
  return out;
}

constexpr double kGapThetas[] = {0.01, 1.0, 100.0, 1e6};

Outcome potential_gap(const Context&) {
  std::size_t bad = 0;
  double tightest = 0.0;
  for (const auto& [s, g] : gap_instances()) {
    double log_m = 0.0;
    for (std::size_t n = 0; n < s.n_users(); ++n) {
      log_m += std::log(static_cast<double>(s.vacant(n).size()));
    }
    for (double theta : kGapThetas) {
      const GapReport r = gap_report(s, g, theta);
      const double bound = log_m / theta;
      if (!(r.phi_gap >= 0.0 && r.phi_gap <= bound)) ++bad;
      tightest = std::max(tightest, r.phi_gap / bound);
    }
  }
  return {bad == 0, "50 instances x 4 theta, violations " + std::to_string(bad) +
                        ", max gap/bound " + num(tightest)};
}

Outcome efficiency_gap(const Context&) {
  std::size_t bad = 0;
  double tightest = 0.0;
  for (const auto& [s, g] : gap_instances()) {
    for (double theta : kGapThetas) {
      const GapReport r = gap_report(s, g, theta);
      if (!(r.rho_theta <= r.theorem5_bound)) ++bad;
      tightest = std::max(tightest, r.rho_theta / r.theorem5_bound);
    }
  }
  std::size_t nonzero = 0;
  for (const auto& [s, g] : gap_instances()) {
    const GapReport r = gap_report(s, complete_graph(s.n_users(), 1.0), 1e6);
    if (r.rho_infinity != 0.0) ++nonzero;
  }
  return {bad == 0 && nonzero == 0,
          "violations " + std::to_string(bad) + ", max rho/bound " +
              num(tightest) + ", complete unit ties with rho != 0: " +
              std::to_string(nonzero)};
}

Outcome mixing_sanity(const Context&) {
  std::size_t general_bad = 0, coupled_bad = 0, coupled_checked = 0;
  std::size_t cheeger_bad = 0, discrete_bad = 0, cases = 0;
  double worst_ratio = 0.0;
  std::string worst_case;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpectrumScenario s = unit_scenario(3, 2, seed, true);
    const SocialGraph g = symmetric_ties(3, seed);
    const MixingInputs in = mixing_inputs(s, g);
    const double theta_th = mixing_bounds(in, 0.0, 0.01).theta_th;
    for (double frac : {0.0, 0.001, 0.01, 0.1, 0.5, 0.9, 1.5, 2.0}) {
      const double theta = frac * theta_th;
      const ExactChain c = exact_chain(s, g, theta);
      const MixingBounds b = mixing_bounds(in, theta, 0.01);
      const double measured = measured_mixing_time(c, 0.01);
      ++cases;
      if (!(measured <= b.general_bound)) ++general_bad;
      if (!spectral_check(c).cheeger_ok) ++cheeger_bad;
      if (b.coupled_bound) {
        ++coupled_checked;
        const double ratio = measured / *b.coupled_bound;
        if (ratio > 1.0) ++coupled_bad;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst_case = "seed " + std::to_string(seed) + " theta " + num(theta) +
                       ": measured " + num(measured) + " vs coupled " +
                       num(*b.coupled_bound);
        }
        // Same comparison for the discrete chain P = I + Q / xi, with k steps
        // counted as k / xi time units.
        if (uniformized_mixing_time(c, 0.01) > *b.coupled_bound) ++discrete_bad;
      }
    }
  }
  return {general_bad == 0 && coupled_bad == 0 && cheeger_bad == 0,
          std::to_string(cases) + " cases; general bound violations " +
              std::to_string(general_bad) + "; coupled bound violations " +
              std::to_string(coupled_bad) + "/" + std::to_string(coupled_checked) +
              " (worst " + worst_case + ", ratio " + num(worst_ratio) +
              "); cheeger failures " + std::to_string(cheeger_bad) +
              "; uniformized chain above coupled bound " +
              std::to_string(discrete_bad) + "/" + std::to_string(coupled_checked)};
}

Outcome theta_tradeoff(const Context&) {
  const ExperimentConfig cfg =
      load_config(std::string(SGUM_FIXTURE_DIR) + "/eight_user_instance.json");
  const auto& in = *cfg.spectrum_instance;
  const SpectrumScenario s(in.positions, in.powers, in.alpha, in.noise, in.vacant,
                           in.interference_range);
  EdgeListOptions opts;
  opts.n_users = s.n_users();
  opts.symmetrize = cfg.social.symmetrize;
  const SocialGraph g = load_edge_list_file(cfg.social.path, opts);
  const Optima opt = brute_force_optima(s, g);
  const ExactChain hot = exact_chain(s, g, 1e6);
  const double mass =
      hot.stationary(static_cast<Eigen::Index>(hot.space.index(opt.argmax_phi)));

  const double theta = cfg.theta.front();
  const std::uint64_t horizon = *cfg.chain.max_events;
  std::size_t ordered = 0, converged = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng init(seed);
    const ChannelProfile a0 = random_profile(s, init);
    ChainConfig cc;
    cc.theta = theta;
    cc.seed = seed;
    cc.horizon.max_events = horizon;
    const ChainTrace t = simulate(s, g, cc, a0);
    auto events = [&](double loss) {
      const auto hit = events_to_convergence(t, opt.phi_star, loss, cfg.chain.dwell);
      return hit ? hit->events : horizon;
    };
    const std::uint64_t strict = events(0.0);
    if (strict < horizon) ++converged;
    if (events(cfg.chain.allowed_loss) <= strict) ++ordered;
  }
  return {mass >= 0.99 && ordered == 20,
          "mass on argmax at theta 1e6 " + num(mass) + " (min 0.99); 20%-loss "
          "events <= 0%-loss events for " + std::to_string(ordered) +
              "/20 seeds at theta " + num(theta) + " (" +
              std::to_string(converged) + "/20 reached 0% loss within " +
              std::to_string(horizon) + " events)"};
}

// Root of 1/p - c - w g / (n + g p) on (0, 1/c] by plain bisection.
double bisect_power(double g, double n, double c, double w) {
  double lo = 0.0, hi = 1.0 / c;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 / mid - c - w * g / (n + g * mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PowerScenario two_user_power(double g01, double g10, double n0, double n1,
                             double c0, double c1, double w) {
  Eigen::MatrixXd g(2, 2);
  g << 0.0, g01, g10, 0.0;
  std::vector<Tie> ties;
  if (w > 0.0) ties = {{0, 1, w}, {1, 0, w}};
  return PowerScenario(Eigen::Vector2d(1.0, 1.0), g, Eigen::Vector2d(n0, n1),
                       Eigen::Vector2d(c0, c1), SocialGraph(2, ties));
}

Outcome power_closed_forms(const Context&) {
  Stopwatch clock;
  Rng rng(808);
  double worst = 0.0;
  std::size_t endpoint_bad = 0, trend_bad = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const double g01 = std::exp(uniform(rng, -4.0, 4.0));
    const double g10 = std::exp(uniform(rng, -4.0, 4.0));
    const double n0 = std::exp(uniform(rng, -4.0, 1.0));
    const double n1 = std::exp(uniform(rng, -4.0, 1.0));
    const double c0 = uniform(rng, 0.1, 10.0);
    const double c1 = uniform(rng, 0.1, 10.0);
    const double w = uniform01(rng);
    const Eigen::VectorXd p = two_user_sne(two_user_power(g01, g10, n0, n1, c0, c1, w));
    worst = std::max(worst, std::abs(p(0) - bisect_power(g01, n1, c0, w)) / p(0));
    worst = std::max(worst, std::abs(p(1) - bisect_power(g10, n0, c1, w)) / p(1));

    const Eigen::VectorXd p_ncg = two_user_sne(two_user_power(g01, g10, n0, n1, c0, c1, 0.0));
    if (p_ncg(0) != 1.0 / c0 || p_ncg(1) != 1.0 / c1) ++endpoint_bad;
    const PowerScenario full = two_user_power(g01, g10, n0, n1, c0, c1, 1.0);
    const Eigen::VectorXd p_num = two_user_sne(full);
    if (p_num(0) != social_optimal_power(full, 0) ||
        p_num(1) != social_optimal_power(full, 1)) {
      ++endpoint_bad;
    }
    Eigen::VectorXd last_p = Eigen::Vector2d::Constant(1e300);
    double last_v = -1e300;
    for (int k = 0; k <= 10; ++k) {
      const PowerScenario sc = two_user_power(g01, g10, n0, n1, c0, c1, k / 10.0);
      const Eigen::VectorXd q = two_user_sne(sc);
      const double v = power_welfare(sc, q);
      if (!(q(0) < last_p(0) && q(1) < last_p(1))) ++trend_bad;
      if (v < last_v - 1e-12 * std::abs(v)) ++trend_bad;
      last_p = q;
      last_v = v;
    }
  }
  const double t = clock.seconds();
  return {worst <= 1e-9 && endpoint_bad == 0 && trend_bad == 0 && t < 5.0,
          "1000 scenarios, max rel diff to bisection " + num(worst) +
              " (tol 1e-9), endpoint mismatches " + std::to_string(endpoint_bad) +
              ", trend violations " + std::to_string(trend_bad) + ", " + num(t) +
              " s (limit 5)"};
}

Outcome supermodularity(const Context&) {
  Rng rng(909);
  std::size_t nonpositive = 0, points = 0, iter_bad = 0;
  double worst_gain = -1e300;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 3 + uniform_index(rng, 4);
    std::vector<Tie> ties;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = uniform(rng, 0.05, 1.0);
        ties.push_back({i, j, w});
        ties.push_back({j, i, w});
      }
    }
    PowerScenarioParams params;
    params.n_users = n;
    params.side = 80.0;
    params.link_length = 10.0;
    params.alpha = 2.0;
    params.noise = 1e-3;
    params.cost_lo = 0.5;
    params.cost_hi = 2.0;
    const PowerScenario sc = random_power_scenario(params, SocialGraph(n, ties), rng());
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd p(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        p(static_cast<Eigen::Index>(i)) = uniform(rng, 0.05, 1.0) / sc.cost(i);
      }
      const std::size_t i = uniform_index(rng, n);
      std::size_t j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      const double h = 1e-3 * std::min(p(static_cast<Eigen::Index>(i)),
                                       p(static_cast<Eigen::Index>(j)));
      if (!(cross_partial_fd(sc, p, i, j, h) > 0.0)) ++nonpositive;
      ++points;
    }
    const IterativeSolution sol = solve_sne_iterative(sc, 1e-12, 10000);
    if (!sol.converged) ++iter_bad;
    for (std::size_t k = 1; k < sol.history.size(); ++k) {
      if (!(sol.history[k].array() >= sol.history[k - 1].array()).all()) ++iter_bad;
    }
    for (std::size_t i = 0; i < n; ++i) {
      worst_gain = std::max(worst_gain, max_deviation_gain(sc, sol.profile, i));
    }
  }
  return {nonpositive == 0 && iter_bad == 0 && worst_gain <= 1e-9,
          std::to_string(points) + " points, nonpositive cross-partials " +
              std::to_string(nonpositive) + ", iteration faults " +
              std::to_string(iter_bad) + ", max grid deviation gain " +
              num(worst_gain) + " (tol 1e-9)"};
}

Outcome random_access(const Context&) {
  Rng rng(1010);
  double worst_residual = 0.0;
  std::size_t bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double load = uniform(rng, 1e-6, 20.0);
    const double cost = uniform(rng, 0.01, 20.0);
    worst_residual = std::max(
        worst_residual, std::abs(access_root_residual(load, cost, access_root(load, cost))));
    const double c0 = uniform(rng, 0.01, 5.0);
    if (access_root(0.0, c0) != std::min(1.0, 1.0 / c0)) ++bad;
  }
  std::size_t monotone_bad = 0, welfare_bad = 0, so_bad = 0;
  for (int inst = 0; inst < 50; ++inst) {
    AccessScenarioParams params;
    params.n_users = 8;
    params.side = 150.0;
    params.cost_lo = 1.0 + 1e-3;
    params.cost_hi = 3.0;
    const std::uint64_t seed = rng();
    // Random ties; raise one weight on an interfered link and recheck.
    std::vector<Tie> ties;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        if (i != j && uniform01(rng) < 0.5) ties.push_back({i, j, uniform(rng, 0.1, 0.9)});
      }
    }
    const RandomAccessScenario sc = random_access_scenario(params, SocialGraph(8, ties), seed);
    const Eigen::VectorXd q = sne_access_profile(sc);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j : sc.out_interference(i)) {
        std::vector<Tie> more = ties;
        bool found = false;
        for (auto& t : more) {
          if (t.from == i && t.to == j) {
            t.weight = std::min(1.0, t.weight + 0.1);
            found = true;
          }
        }
        if (!found) more.push_back({i, j, 0.1});
        const RandomAccessScenario up =
            random_access_scenario(params, SocialGraph(8, more), seed);
        const Eigen::VectorXd q2 = sne_access_profile(up);
        for (std::size_t k = 0; k < 8; ++k) {
          const auto e = static_cast<Eigen::Index>(k);
          if (k == i ? !(q2(e) < q(e)) : q2(e) != q(e)) ++monotone_bad;
        }
      }
    }
    double last = -1e300;
    for (int k = 0; k <= 10; ++k) {
      const SocialGraph g = k == 0 ? empty_graph(8) : complete_graph(8, k / 10.0);
      const RandomAccessScenario grid = random_access_scenario(params, g, seed);
      const double v = access_welfare(grid, sne_access_profile(grid));
      if (v < last - 1e-12 * std::abs(v)) ++welfare_bad;
      last = v;
    }
    const RandomAccessScenario full =
        random_access_scenario(params, complete_graph(8, 1.0), seed);
    if (sne_access_profile(full) != social_optimal_access_profile(full)) ++so_bad;
  }
  return {worst_residual <= 1e-10 && bad == 0 && monotone_bad == 0 &&
              welfare_bad == 0 && so_bad == 0,
          "max root residual " + num(worst_residual) + " (tol 1e-10), W=0 mismatches " +
              std::to_string(bad) + ", monotonicity violations " +
              std::to_string(monotone_bad) + ", welfare-grid violations " +
              std::to_string(welfare_bad) + ", SNE != SO at unit ties " +
              std::to_string(so_bad)};
}

struct OrderingSummary {
  std::size_t order_bad = 0;
  std::size_t trend_bad = 0;
  double worst = 0.0;  // largest violation of either inequality
  double at_one = 0.0;
  std::string trace;
  bool clean = false;
};

OrderingSummary ordering_summary(const std::string& scenario) {
  const ExperimentConfig cfg = parse_config(R"({
    "experiment": "spectrum-sweep-PL", "seed": 11, "replications": 100,
    "scenario": )" + scenario + R"(,
    "social": {"kind": "er", "weight": 1},
    "sweep": {"variable": "p_link",
              "values": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1]}})");
  const ExperimentResult res = run_experiment(cfg);
  std::istringstream in(res.files.front().content);
  std::string line;
  std::getline(in, line);
  std::map<double, std::map<std::string, std::pair<double, double>>> table;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    table[std::stod(cells[0])][cells[1]] = {std::stod(cells[2]), std::stod(cells[4])};
  }
  OrderingSummary out;
  double last = 1e300;
  for (const auto& [x, row] : table) {
    const double ncg = row.at("NCG").first;
    const double sgum = row.at("SGUM").first;
    const double num_opt = row.at("NUM").first;
    if (!(num_opt <= sgum && sgum <= ncg)) ++out.order_bad;
    out.worst = std::max({out.worst, (num_opt - sgum) / ncg, (sgum - ncg) / ncg});
    const double normalized = row.at("SGUM").second;
    if (normalized > last) ++out.trend_bad;
    if (last < 1e300) out.worst = std::max(out.worst, normalized - last);
    last = normalized;
    out.trace += (out.trace.empty() ? "" : " ") + num(normalized);
  }
  out.at_one = table.at(1.0).at("SGUM").second;
  out.clean = res.warnings.empty();
  return out;
}

Outcome benchmark_ordering(const Context&) {
  // Default generator: 500 m square, 20 dBm, alpha 4, -100 to -90 dBm noise.
  const OrderingSummary main = ordering_summary(R"({"n_users": 6, "n_channels": 3})");
  // Noise-relevant regime, reported for comparison only.
  const OrderingSummary alt = ordering_summary(
      R"({"n_users": 6, "n_channels": 3, "side": 10, "power_dbm": 30,
          "alpha": 2, "noise_dbm_lo": 27, "noise_dbm_hi": 33})");
  return {main.order_bad == 0 && main.trend_bad == 0 && main.at_one == 1.0 &&
              main.clean,
          "N=6 M=3, 100 seeds; ordering violations " +
              std::to_string(main.order_bad) + ", trend violations " +
              std::to_string(main.trend_bad) + ", worst relative violation " +
              num(main.worst) + ", normalized SGUM [" + main.trace +
              "], at P_L=1 " + num(main.at_one) +
              "; noise-relevant regime: ordering " +
              std::to_string(alt.order_bad) + ", trend " +
              std::to_string(alt.trend_bad) + ", worst " + num(alt.worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility(const Context& ctx) {
  if (ctx.cli.empty()) return {false, "no --cli given"};
  struct Case {
    std::string sub;
    std::string config;
  };
  const std::vector<Case> cases = {
      {"spectrum", R"({"experiment": "spectrum-chain", "replications": 3,
        "theta": [0.5, 1e6], "scenario": {"n_users": 5, "n_channels": 3},
        "social": {"kind": "er", "p_link": 0.4}, "chain": {"max_events": 500}})"},
      {"spectrum", R"({"experiment": "spectrum-theta-tradeoff", "replications": 3,
        "theta": [10, 1e6], "scenario": {"n_users": 4, "n_channels": 3},
        "chain": {"max_events": 2000, "dwell": 10}})"},
      {"stationary", R"({"experiment": "stationary-analysis", "replications": 2,
        "theta": [1e9, 1e11], "scenario": {"n_users": 3, "n_channels": 2}})"},
      {"power", R"({"experiment": "power-sweep", "replications": 3,
        "scenario": {"n_users": 3}})"},
      {"random-access", R"({"experiment": "random-access-sweep", "replications": 3,
        "scenario": {"n_users": 6}})"},
      {"sweep", R"({"experiment": "spectrum-sweep-PL", "replications": 4,
        "scenario": {"n_users": 5, "n_channels": 3},
        "sweep": {"values": [0, 0.5, 1]}})"},
  };
  std::size_t files = 0, mismatched = 0, failed_runs = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const fs::path dir = ctx.work / ("repro_" + std::to_string(k));
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream(dir / "config.json") << cases[k].config;
    }
    auto run = [&](const fs::path& config, const fs::path& out,
                   const std::string& extra) {
      const std::string cmd = "\"" + ctx.cli + "\" " + cases[k].sub +
                              " --config \"" + config.string() + "\" --out-dir \"" +
                              out.string() + "\" --threads 3" + extra +
                              " > \"" + (out.string() + ".log") + "\" 2>&1";
      return std::system(cmd.c_str()) == 0;
    };
    // Seed override on the first run, so replay must read it back from the
    // manifest.
    if (!run(dir / "config.json", dir / "first", " --seed 77") ||
        !run(dir / "first" / "manifest.json", dir / "second", "")) {
      ++failed_runs;
      continue;
    }
    for (const auto& entry : fs::directory_iterator(dir / "first")) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const fs::path other = dir / "second" / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++mismatched;
    }
  }
  return {failed_runs == 0 && mismatched == 0 && files >= cases.size(),
          std::to_string(cases.size()) + " CLI runs replayed from their manifests, " +
              std::to_string(files) + " CSV files compared, mismatches " +
              std::to_string(mismatched) + ", failed runs " +
              std::to_string(failed_runs)};
}

struct Criterion {
  const char* name;
  std::function<Outcome(const Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"potential-game identity", potential_identity},
      {"detailed balance and stationarity", detailed_balance},
      {"chain occupancy matches exact law", chain_correctness},
      {"potential gap bound", potential_gap},
      {"efficiency gap bound", efficiency_gap},
      {"mixing-time bounds", mixing_sanity},
      {"theta trade-off", theta_tradeoff},
      {"two-user power control closed forms", power_closed_forms},
      {"supermodularity and best-response iteration", supermodularity},
      {"random access closed forms", random_access},
      {"spectrum benchmark ordering", benchmark_ordering},
      {"CLI reproducibility from manifests", reproducibility},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SGUM acceptance checks"};
  int only = 0;
  Context ctx;
  std::string work = (fs::temp_directory_path() / "sgum_acceptance").string();
  app.add_option("--criterion", only, "run a single criterion (1-12)")
      ->check(CLI::Range(1, 12));
  app.add_option("--cli", ctx.cli, "path to the sgum executable");
  app.add_option("--work-dir", work, "scratch directory for CLI runs");
  CLI11_PARSE(app, argc, argv);
  ctx.work = work;
  fs::create_directories(ctx.work);

  bool all_pass = true;
  const auto& list = criteria();
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome o;
    try {
      o = list[k].run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, list[k].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
