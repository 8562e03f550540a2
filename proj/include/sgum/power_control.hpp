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

// Socially-aware power control. User i earns ln(SINR_i) - c_i p_i and
// maximizes that plus the tie-weighted utilities of its social neighbours.

#ifndef SGUM_POWER_CONTROL_HPP_
#define SGUM_POWER_CONTROL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sgum/social_graph.hpp"

namespace sgum {

class PowerScenario {
 public:
  // gain(i, j) is the cross gain from transmitter i to receiver j; the
  // diagonal is ignored. Ties must be standard (non-negative).
  PowerScenario(Eigen::VectorXd direct_gain, Eigen::MatrixXd cross_gain,
                Eigen::VectorXd noise, Eigen::VectorXd cost, SocialGraph ties);

  std::size_t n_users() const {
    return static_cast<std::size_t>(h_.size());
  }
  double h(std::size_t i) const { return h_(idx(i)); }
  double g(std::size_t i, std::size_t j) const { return g_(idx(i), idx(j)); }
  double noise(std::size_t i) const { return n_(idx(i)); }
  double cost(std::size_t i) const { return c_(idx(i)); }
  const Eigen::VectorXd& direct_gain() const { return h_; }
  const Eigen::MatrixXd& cross_gain() const { return g_; }
  const Eigen::VectorXd& noise() const { return n_; }
  const Eigen::VectorXd& cost() const { return c_; }
  const SocialGraph& ties() const { return ties_; }

 private:
  static Eigen::Index idx(std::size_t i) {
    return static_cast<Eigen::Index>(i);
  }

  Eigen::VectorXd h_;
  Eigen::MatrixXd g_;
  Eigen::VectorXd n_;
  Eigen::VectorXd c_;
  SocialGraph ties_;
};

// n_i + sum_{j != i} g_ji p_j.
double interference_plus_noise(const PowerScenario& sc,
                               const Eigen::VectorXd& p, std::size_t i);

// h_i p_i / (n_i + sum_{j != i} g_ji p_j).
double sinr(const PowerScenario& sc, const Eigen::VectorXd& p, std::size_t i);

// ln(sinr) - c_i p_i. Throws DomainError when p_i <= 0.
double power_utility(const PowerScenario& sc, const Eigen::VectorXd& p,
                     std::size_t i);
double power_social_utility(const PowerScenario& sc, const Eigen::VectorXd& p,
                            std::size_t i);
double power_welfare(const PowerScenario& sc, const Eigen::VectorXd& p);

// d S_i / d p_i = 1/p_i - c_i
//   - sum_k w_ik g_ik / (n_k + sum_{j != k} g_jk p_j).
double best_response_foc(const PowerScenario& sc, const Eigen::VectorXd& p,
                         std::size_t i);

// Closed-form two-user equilibrium. p_1 is the positive root of
// c_1 g_12 p^2 + (c_1 n_2 + w_12 g_12 - g_12) p - n_2 = 0, evaluated as
// beta / (sqrt(alpha^2 + beta) + alpha) to avoid cancellation. A zero
// cross gain gives 1/c for that user.
Eigen::VectorXd two_user_sne(const PowerScenario& sc);

// Positive root of c g p^2 + c n p - n = 0 for user i of a two-user
// scenario (g = g_i,other, n = n_other); 1/c when g = 0.
double social_optimal_power(const PowerScenario& sc, std::size_t i);

struct PowerSolveOptions {
  // Optional box p_i <= p_max; off by default.
  std::optional<double> p_max;
};

// Root of best_response_foc in p_i on (0, 1/c_i], by bisection to 1e-12.
// Entry i of p is ignored.
double best_response(const PowerScenario& sc, const Eigen::VectorXd& p,
                     std::size_t i, const PowerSolveOptions& opts = {});

struct IterativeSolution {
  Eigen::VectorXd profile;
  bool converged = false;
  // Sweeps that moved some coordinate by at least tol.
  std::size_t rounds = 0;
  // Profile after each sweep, starting with the zero profile.
  std::vector<Eigen::VectorXd> history;
};

// Round-robin best responses from the zero profile until a sweep changes
// no coordinate by tol or more.
IterativeSolution solve_sne_iterative(const PowerScenario& sc, double tol,
                                      std::size_t max_rounds,
                                      const PowerSolveOptions& opts = {});

// Exact d^2 S_i / (d p_i d p_j), i != j.
double cross_partial(const PowerScenario& sc, const Eigen::VectorXd& p,
                     std::size_t i, std::size_t j);

// Central finite-difference estimate of the same quantity with step h.
double cross_partial_fd(const PowerScenario& sc, const Eigen::VectorXd& p,
                        std::size_t i, std::size_t j, double h);

// Largest gain in S_i from moving p_i alone over a grid of `points`
// values spanning p_i * [1 - spread, 1 + spread], then a finer grid of the
// same size around the best grid point.
double max_deviation_gain(const PowerScenario& sc, const Eigen::VectorXd& p,
                          std::size_t i, std::size_t points = 201,
                          double spread = 0.5);

struct PowerScenarioParams {
  std::size_t n_users = 2;
  double side = 200.0;         // metres
  double link_length = 20.0;   // transmitter to its receiver
  double alpha = 3.0;
  double noise = 1e-7;
  double cost_lo = 1.0;
  double cost_hi = 1.0;
};

// Transmitters uniform in a square, each receiver at link_length in a
// uniform direction. h_i = d_ii^-alpha, g_ij = d(tx_i, rx_j)^-alpha.
PowerScenario random_power_scenario(const PowerScenarioParams& params,
                                    const SocialGraph& ties,
                                    std::uint64_t seed);

}  // namespace sgum

#endif  // SGUM_POWER_CONTROL_HPP_
