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

#include "sgum/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sgum/errors.hpp"
#include "sgum/random.hpp"

namespace sgum {
namespace {

constexpr double kBisectionTolerance = 1e-12;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_users(const PowerScenario& sc, const Eigen::VectorXd& p) {
  if (static_cast<std::size_t>(p.size()) != sc.n_users()) {
    throw ValidationError("power profile length does not match user count");
  }
}

// beta / (sqrt(alpha^2 + beta) + alpha), the positive root of
// p^2 + 2 alpha p - beta = 0 written without cancellation for alpha > 0.
double positive_root(double alpha, double beta) {
  const double r = std::sqrt(alpha * alpha + beta);
  return alpha >= 0.0 ? beta / (r + alpha) : r - alpha;
}

}  // namespace

PowerScenario::PowerScenario(Eigen::VectorXd direct_gain,
                             Eigen::MatrixXd cross_gain, Eigen::VectorXd noise,
                             Eigen::VectorXd cost, SocialGraph ties)
    : h_(std::move(direct_gain)),
      g_(std::move(cross_gain)),
      n_(std::move(noise)),
      c_(std::move(cost)),
      ties_(std::move(ties)) {
  const Eigen::Index n = h_.size();
  if (n == 0) throw ValidationError("power scenario needs at least one user");
  if (g_.rows() != n || g_.cols() != n || n_.size() != n || c_.size() != n ||
      ties_.n_users() != static_cast<std::size_t>(n)) {
    throw ValidationError("power scenario arrays disagree on the user count");
  }
  if (!(h_.array() > 0.0).all() || !h_.allFinite()) {
    throw ValidationError("direct gains must be positive");
  }
  if (!(n_.array() > 0.0).all() || !n_.allFinite()) {
    throw ValidationError("noise powers must be positive");
  }
  if (!(c_.array() > 0.0).all() || !c_.allFinite()) {
    throw ValidationError("power costs must be positive");
  }
  g_.diagonal().setZero();
  if (!(g_.array() >= 0.0).all() || !g_.allFinite()) {
    throw ValidationError("cross gains must be non-negative");
  }
  if (ties_.mode() != TieMode::kStandard) {
    throw ValidationError("power control needs non-negative ties");
  }
}

double interference_plus_noise(const PowerScenario& sc,
                               const Eigen::VectorXd& p, std::size_t i) {
  require_users(sc, p);
  double total = sc.noise(i);
  for (std::size_t j = 0; j < sc.n_users(); ++j) {
    if (j != i) total += sc.g(j, i) * p(ix(j));
  }
  return total;
}

double sinr(const PowerScenario& sc, const Eigen::VectorXd& p, std::size_t i) {
  return sc.h(i) * p(ix(i)) / interference_plus_noise(sc, p, i);
}

double power_utility(const PowerScenario& sc, const Eigen::VectorXd& p,
                     std::size_t i) {
  require_users(sc, p);
  if (!(p(ix(i)) > 0.0)) {
    throw DomainError("power utility undefined at p_i <= 0");
  }
  return std::log(sinr(sc, p, i)) - sc.cost(i) * p(ix(i));
}

double power_social_utility(const PowerScenario& sc, const Eigen::VectorXd& p,
                            std::size_t i) {
  double s = power_utility(sc, p, i);
  for (const auto& [k, w] : sc.ties().out_ties(i)) {
    s += w * power_utility(sc, p, k);
  }
  return s;
}

double power_welfare(const PowerScenario& sc, const Eigen::VectorXd& p) {
  double v = 0.0;
  for (std::size_t i = 0; i < sc.n_users(); ++i) v += power_utility(sc, p, i);
  return v;
}

double best_response_foc(const PowerScenario& sc, const Eigen::VectorXd& p,
                         std::size_t i) {
  double d = 1.0 / p(ix(i)) - sc.cost(i);
  for (const auto& [k, w] : sc.ties().out_ties(i)) {
    const double gik = sc.g(i, k);
    if (gik != 0.0) d -= w * gik / interference_plus_noise(sc, p, k);
  }
  return d;
}

Eigen::VectorXd two_user_sne(const PowerScenario& sc) {
  if (sc.n_users() != 2) {
    throw ValidationError("two_user_sne needs exactly two users");
  }
  Eigen::VectorXd p(2);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t o = 1 - i;
    const double g = sc.g(i, o);
    const double c = sc.cost(i);
    if (g == 0.0) {
      p(ix(i)) = 1.0 / c;
      continue;
    }
    const double n = sc.noise(o);
    const double w = sc.ties().weight(i, o);
    const double alpha = (w * g + c * n - g) / (2.0 * c * g);
    const double beta = n / (c * g);
    if (w == 0.0) {
      p(ix(i)) = 1.0 / c;
    } else if (w == 1.0) {
      // Same first-order condition as the social optimum.
      p(ix(i)) = social_optimal_power(sc, i);
    } else {
      p(ix(i)) = positive_root(alpha, beta);
    }
  }
  return p;
}

double social_optimal_power(const PowerScenario& sc, std::size_t i) {
  if (sc.n_users() != 2) {
    throw ValidationError("social_optimal_power needs exactly two users");
  }
  const std::size_t o = 1 - i;
  const double g = sc.g(i, o);
  const double c = sc.cost(i);
  if (g == 0.0) return 1.0 / c;
  const double n = sc.noise(o);
  return 2.0 * n / (c * n + std::sqrt(c * c * n * n + 4.0 * c * g * n));
}

double best_response(const PowerScenario& sc, const Eigen::VectorXd& p,
                     std::size_t i, const PowerSolveOptions& opts) {
  require_users(sc, p);
  const double top = 1.0 / sc.cost(i);
  bool coupled = false;
  for (const auto& [k, w] : sc.ties().out_ties(i)) {
    if (w * sc.g(i, k) != 0.0) coupled = true;
  }
  double root = top;
  if (coupled) {
    Eigen::VectorXd q = p;
    double lo = 0.0;
    double hi = top;
    while (hi - lo > kBisectionTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      q(ix(i)) = mid;
      if (best_response_foc(sc, q, i) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    root = 0.5 * (lo + hi);
  }
  if (opts.p_max) root = std::min(root, *opts.p_max);
  return root;
}

IterativeSolution solve_sne_iterative(const PowerScenario& sc, double tol,
                                      std::size_t max_rounds,
                                      const PowerSolveOptions& opts) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (opts.p_max && !(*opts.p_max > 0.0)) {
    throw ValidationError("p_max must be positive");
  }
  IterativeSolution out;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(ix(sc.n_users()));
  out.history.push_back(p);
  for (std::size_t sweep = 1; sweep <= max_rounds; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < sc.n_users(); ++i) {
      const double next = best_response(sc, p, i, opts);
      change = std::max(change, std::abs(next - p(ix(i))));
      p(ix(i)) = next;
    }
    out.history.push_back(p);
    if (change < tol) {
      out.converged = true;
      break;
    }
    out.rounds = sweep;
  }
  out.profile = p;
  return out;
}

double cross_partial(const PowerScenario& sc, const Eigen::VectorXd& p,
                     std::size_t i, std::size_t j) {
  if (i == j) throw ValidationError("cross_partial needs i != j");
  double d = 0.0;
  for (const auto& [k, w] : sc.ties().out_ties(i)) {
    if (k == j) continue;
    const double den = interference_plus_noise(sc, p, k);
    d += w * sc.g(i, k) * sc.g(j, k) / (den * den);
  }
  return d;
}

double cross_partial_fd(const PowerScenario& sc, const Eigen::VectorXd& p,
                        std::size_t i, std::size_t j, double h) {
  auto at = [&](double di, double dj) {
    Eigen::VectorXd q = p;
    q(ix(i)) += di;
    q(ix(j)) += dj;
    return power_social_utility(sc, q, i);
  };
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

double max_deviation_gain(const PowerScenario& sc, const Eigen::VectorXd& p,
                          std::size_t i, std::size_t points, double spread) {
  if (points < 2) throw ValidationError("need at least two grid points");
  const double base = power_social_utility(sc, p, i);
  const double centre = p(ix(i));
  Eigen::VectorXd q = p;
  double best = -std::numeric_limits<double>::infinity();
  double best_p = centre;
  auto scan = [&](double lo, double hi) {
    for (std::size_t k = 0; k < points; ++k) {
      const double x = lo + (hi - lo) * static_cast<double>(k) /
                                static_cast<double>(points - 1);
      if (!(x > 0.0)) continue;
      q(ix(i)) = x;
      const double v = power_social_utility(sc, q, i);
      if (v > best) {
        best = v;
        best_p = x;
      }
    }
  };
  scan(centre * (1.0 - spread), centre * (1.0 + spread));
  const double step = 2.0 * spread * centre / static_cast<double>(points - 1);
  scan(best_p - step, best_p + step);
  return best - base;
}

PowerScenario random_power_scenario(const PowerScenarioParams& params,
                                    const SocialGraph& ties,
                                    std::uint64_t seed) {
  const std::size_t n = params.n_users;
  if (n == 0 || ties.n_users() != n) {
    throw ValidationError("power scenario user count mismatch");
  }
  if (!(params.side > 0.0) || !(params.link_length > 0.0) ||
      !(params.alpha > 0.0) || !(params.noise > 0.0) ||
      !(params.cost_lo > 0.0) || params.cost_hi < params.cost_lo) {
    throw ValidationError("invalid power scenario parameters");
  }
  Rng rng(seed);
  std::vector<Eigen::Vector2d> tx(n);
  std::vector<Eigen::Vector2d> rx(n);
  Eigen::VectorXd cost(ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    tx[i] = {uniform(rng, 0.0, params.side), uniform(rng, 0.0, params.side)};
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    rx[i] = tx[i] + params.link_length *
                        Eigen::Vector2d(std::cos(angle), std::sin(angle));
    cost(ix(i)) = uniform(rng, params.cost_lo, params.cost_hi);
  }
  Eigen::VectorXd h(ix(n));
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    h(ix(i)) = std::pow(params.link_length, -params.alpha);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::max((tx[i] - rx[j]).norm(), 1e-3);
      g(ix(i), ix(j)) = std::pow(d, -params.alpha);
    }
  }
  return PowerScenario(h, g, Eigen::VectorXd::Constant(ix(n), params.noise),
                       cost, ties);
}

}  // namespace sgum
