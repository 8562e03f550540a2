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

#include "sgum/random_access.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sgum/errors.hpp"
#include "sgum/random.hpp"

namespace sgum {
namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

IndexSets invert(const IndexSets& out) {
  IndexSets in(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j : out[i]) in[j].push_back(i);
  }
  return in;
}

}  // namespace

RandomAccessScenario::RandomAccessScenario(IndexSets out_interference,
                                           Eigen::VectorXd z,
                                           Eigen::VectorXd cost,
                                           SocialGraph ties)
    : out_(std::move(out_interference)),
      z_(std::move(z)),
      c_(std::move(cost)),
      ties_(std::move(ties)) {
  const std::size_t n = out_.size();
  if (n == 0) throw ValidationError("access scenario needs at least one user");
  if (static_cast<std::size_t>(z_.size()) != n ||
      static_cast<std::size_t>(c_.size()) != n || ties_.n_users() != n) {
    throw ValidationError("access scenario arrays disagree on the user count");
  }
  if (!(z_.array() > 0.0).all() || !z_.allFinite()) {
    throw ValidationError("efficiencies must be positive");
  }
  if (!(c_.array() > 0.0).all() || !c_.allFinite()) {
    throw ValidationError("access costs must be positive");
  }
  if (ties_.mode() != TieMode::kStandard) {
    throw ValidationError("random access needs non-negative ties");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& set = out_[i];
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw ValidationError("duplicate entry in interference set of user " +
                            std::to_string(i));
    }
    for (std::size_t j : set) {
      if (j >= n) throw ValidationError("interference index out of range");
      if (j == i) throw ValidationError("a link cannot interfere itself");
    }
  }
  in_ = invert(out_);
}

RandomAccessScenario RandomAccessScenario::from_both(
    IndexSets out_interference, const IndexSets& in_interference,
    Eigen::VectorXd z, Eigen::VectorXd cost, SocialGraph ties) {
  RandomAccessScenario sc(std::move(out_interference), std::move(z),
                          std::move(cost), std::move(ties));
  if (in_interference.size() != sc.n_users()) {
    throw ValidationError("in-interference sets disagree on the user count");
  }
  for (std::size_t i = 0; i < sc.n_users(); ++i) {
    std::vector<std::size_t> given = in_interference[i];
    std::sort(given.begin(), given.end());
    if (given != sc.in_[i]) {
      throw ValidationError("interference views disagree at user " +
                            std::to_string(i));
    }
  }
  return sc;
}

void validate_access_profile(const RandomAccessScenario& sc,
                             const Eigen::VectorXd& q) {
  if (static_cast<std::size_t>(q.size()) != sc.n_users()) {
    throw ValidationError("access profile length does not match user count");
  }
  if (!(q.array() >= 0.0).all() || !(q.array() <= 1.0).all()) {
    throw ValidationError("access probabilities must lie in [0, 1]");
  }
}

double success_probability(const RandomAccessScenario& sc,
                           const Eigen::VectorXd& q, std::size_t i) {
  validate_access_profile(sc, q);
  double b = q(ix(i));
  for (std::size_t j : sc.in_interference(i)) b *= 1.0 - q(ix(j));
  return b;
}

double access_utility(const RandomAccessScenario& sc, const Eigen::VectorXd& q,
                      std::size_t i) {
  const double b = success_probability(sc, q, i);
  if (!(b > 0.0)) {
    throw DomainError("access utility undefined when b_" + std::to_string(i) +
                      " = 0");
  }
  return std::log(sc.z(i) * b) - sc.cost(i) * q(ix(i));
}

double access_social_utility(const RandomAccessScenario& sc,
                             const Eigen::VectorXd& q, std::size_t i) {
  double s = access_utility(sc, q, i);
  for (const auto& [k, w] : sc.ties().out_ties(i)) {
    s += w * access_utility(sc, q, k);
  }
  return s;
}

double tie_load(const RandomAccessScenario& sc, std::size_t i) {
  double w = 0.0;
  for (std::size_t j : sc.out_interference(i)) w += sc.ties().weight(i, j);
  return w;
}

double access_root(double load, double cost) {
  if (!(cost > 0.0)) throw ValidationError("access cost must be positive");
  if (!(load >= 0.0)) throw ValidationError("tie load must be non-negative");
  if (load == 0.0) return std::min(1.0, 1.0 / cost);
  const double b = load + 1.0 + cost;
  const double d = load + 1.0 - cost;
  return 2.0 / (b + std::sqrt(d * d + 4.0 * cost * load));
}

double sne_access_probability(const RandomAccessScenario& sc, std::size_t i) {
  return access_root(tie_load(sc, i), sc.cost(i));
}

double social_optimal_access(const RandomAccessScenario& sc, std::size_t i) {
  return access_root(static_cast<double>(sc.out_interference(i).size()),
                     sc.cost(i));
}

Eigen::VectorXd sne_access_profile(const RandomAccessScenario& sc) {
  Eigen::VectorXd q(ix(sc.n_users()));
  for (std::size_t i = 0; i < sc.n_users(); ++i) {
    q(ix(i)) = sne_access_probability(sc, i);
  }
  return q;
}

Eigen::VectorXd social_optimal_access_profile(const RandomAccessScenario& sc) {
  Eigen::VectorXd q(ix(sc.n_users()));
  for (std::size_t i = 0; i < sc.n_users(); ++i) {
    q(ix(i)) = social_optimal_access(sc, i);
  }
  return q;
}

double access_root_residual(double load, double cost, double q) {
  return cost * q * q - (load + 1.0 + cost) * q + 1.0;
}

double access_root_load_derivative(double load, double cost) {
  const double q = access_root(load, cost);
  return q / (2.0 * cost * q - (load + 1.0 + cost));
}

double access_welfare(const RandomAccessScenario& sc,
                      const Eigen::VectorXd& q) {
  double v = 0.0;
  for (std::size_t i = 0; i < sc.n_users(); ++i) v += access_utility(sc, q, i);
  return v;
}

std::optional<double> try_access_welfare(const RandomAccessScenario& sc,
                                         const Eigen::VectorXd& q) {
  validate_access_profile(sc, q);
  for (std::size_t i = 0; i < sc.n_users(); ++i) {
    if (!(success_probability(sc, q, i) > 0.0)) return std::nullopt;
  }
  return access_welfare(sc, q);
}

double access_deviation_gain(const RandomAccessScenario& sc,
                             const Eigen::VectorXd& q, std::size_t i,
                             std::size_t points) {
  if (points == 0) throw ValidationError("need at least one grid point");
  const double base = access_social_utility(sc, q, i);
  Eigen::VectorXd r = q;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= points; ++k) {
    r(ix(i)) = static_cast<double>(k) / static_cast<double>(points);
    const auto v = [&]() -> std::optional<double> {
      try {
        return access_social_utility(sc, r, i);
      } catch (const DomainError&) {
        return std::nullopt;
      }
    }();
    if (v) best = std::max(best, *v);
  }
  return best - base;
}

RandomAccessScenario random_access_scenario(const AccessScenarioParams& params,
                                            const SocialGraph& ties,
                                            std::uint64_t seed) {
  const std::size_t n = params.n_users;
  if (n == 0 || ties.n_users() != n) {
    throw ValidationError("access scenario user count mismatch");
  }
  if (!(params.side > 0.0) || !(params.link_length >= 0.0) ||
      !(params.interference_range >= 0.0) || !(params.z > 0.0) ||
      !(params.cost_lo > 0.0) || params.cost_hi < params.cost_lo) {
    throw ValidationError("invalid access scenario parameters");
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
  IndexSets out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (tx[i] - rx[j]).norm() <= params.interference_range) {
        out[i].push_back(j);
      }
    }
  }
  return RandomAccessScenario(std::move(out),
                              Eigen::VectorXd::Constant(ix(n), params.z), cost,
                              ties);
}

}  // namespace sgum
