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

// Socially-aware slotted random access. User i contends with probability
// q_i, succeeds with b_i = q_i prod_{j in I-_i} (1 - q_j), and earns
// ln(z_i b_i) - c_i q_i.

#ifndef SGUM_RANDOM_ACCESS_HPP_
#define SGUM_RANDOM_ACCESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sgum/social_graph.hpp"

namespace sgum {

using IndexSets = std::vector<std::vector<std::size_t>>;

class RandomAccessScenario {
 public:
  // out_interference[i] = I+_i, the receivers transmitter i interferes.
  // I-_i is derived. Ties must be standard.
  RandomAccessScenario(IndexSets out_interference, Eigen::VectorXd z,
                       Eigen::VectorXd cost, SocialGraph ties);

  // Both views given; throws ValidationError unless they agree.
  static RandomAccessScenario from_both(IndexSets out_interference,
                                        const IndexSets& in_interference,
                                        Eigen::VectorXd z, Eigen::VectorXd cost,
                                        SocialGraph ties);

  std::size_t n_users() const { return out_.size(); }
  // Sorted ascending.
  const std::vector<std::size_t>& out_interference(std::size_t i) const {
    return out_[i];
  }
  const std::vector<std::size_t>& in_interference(std::size_t i) const {
    return in_[i];
  }
  double z(std::size_t i) const { return z_(static_cast<Eigen::Index>(i)); }
  double cost(std::size_t i) const {
    return c_(static_cast<Eigen::Index>(i));
  }
  const SocialGraph& ties() const { return ties_; }

 private:
  IndexSets out_;
  IndexSets in_;
  Eigen::VectorXd z_;
  Eigen::VectorXd c_;
  SocialGraph ties_;
};

// Throws ValidationError unless q has one entry per user in [0, 1].
void validate_access_profile(const RandomAccessScenario& sc,
                             const Eigen::VectorXd& q);

double success_probability(const RandomAccessScenario& sc,
                           const Eigen::VectorXd& q, std::size_t i);

// ln(z_i b_i) - c_i q_i; DomainError when b_i = 0.
double access_utility(const RandomAccessScenario& sc, const Eigen::VectorXd& q,
                      std::size_t i);
double access_social_utility(const RandomAccessScenario& sc,
                             const Eigen::VectorXd& q, std::size_t i);

// W_i = sum_{j in I+_i} w_ij.
double tie_load(const RandomAccessScenario& sc, std::size_t i);

// Smaller root of c q^2 - (W + 1 + c) q + 1 = 0, evaluated as
// 2 / (W + 1 + c + sqrt((W + 1 - c)^2 + 4 c W)); W = 0 gives min(1, 1/c).
double access_root(double load, double cost);

double sne_access_probability(const RandomAccessScenario& sc, std::size_t i);
// Same root with W = |I+_i|.
double social_optimal_access(const RandomAccessScenario& sc, std::size_t i);

Eigen::VectorXd sne_access_profile(const RandomAccessScenario& sc);
Eigen::VectorXd social_optimal_access_profile(const RandomAccessScenario& sc);

// c q^2 - (W + 1 + c) q + 1 at q.
double access_root_residual(double load, double cost, double q);

// dq/dW of the smaller root, q / (2 c q - (W + 1 + c)); always negative.
double access_root_load_derivative(double load, double cost);

// Sum of utilities. DomainError when some b_i = 0.
double access_welfare(const RandomAccessScenario& sc, const Eigen::VectorXd& q);

// Empty instead of throwing when some b_i = 0.
std::optional<double> try_access_welfare(const RandomAccessScenario& sc,
                                         const Eigen::VectorXd& q);

// Largest gain in S_i from moving q_i alone over `points` values spread
// evenly over (0, 1].
double access_deviation_gain(const RandomAccessScenario& sc,
                             const Eigen::VectorXd& q, std::size_t i,
                             std::size_t points = 10000);

struct AccessScenarioParams {
  std::size_t n_users = 10;
  double side = 300.0;          // metres
  double link_length = 20.0;
  double interference_range = 100.0;
  double z = 1.0;
  double cost_lo = 1.0;
  double cost_hi = 1.0;
};

// Link i interferes link j when transmitter i is within range of
// receiver j.
RandomAccessScenario random_access_scenario(const AccessScenarioParams& params,
                                            const SocialGraph& ties,
                                            std::uint64_t seed);

}  // namespace sgum

#endif  // SGUM_RANDOM_ACCESS_HPP_
