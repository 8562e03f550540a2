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

// Scenario builders shared by the unit and acceptance tests. Unit-scale
// instances use 1 W transmitters a few metres apart with alpha = 2, so
// potentials are O(1) and theta values of order one matter.

#ifndef SGUM_TESTS_TEST_SUPPORT_HPP_
#define SGUM_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sgum/random.hpp"
#include "sgum/social_graph.hpp"
#include "sgum/spectrum_model.hpp"

namespace sgum::testing {

inline SpectrumScenario unit_scenario(std::size_t n, std::size_t m,
                                      std::uint64_t seed,
                                      bool all_vacant = false,
                                      std::optional<double> range = {}) {
  Rng rng(seed);
  std::vector<Eigen::Vector2d> pos;
  while (pos.size() < n) {
    const Eigen::Vector2d p(uniform(rng, 0.0, 2.0), uniform(rng, 0.0, 2.0));
    const bool clear = std::all_of(pos.begin(), pos.end(), [&](const auto& q) {
      return (p - q).norm() > 0.1;
    });
    if (clear) pos.push_back(p);
  }
  Eigen::MatrixXd noise(static_cast<Eigen::Index>(n),
                        static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < noise.size(); ++i) {
    noise(i) = uniform(rng, 0.05, 0.5);
  }
  std::vector<std::vector<Channel>> vacant(n);
  for (auto& v : vacant) {
    for (std::size_t c = 0; c < m; ++c) {
      if (all_vacant || uniform01(rng) < 0.7) v.push_back(static_cast<Channel>(c));
    }
    if (v.empty()) v.push_back(static_cast<Channel>(uniform_index(rng, m)));
  }
  return SpectrumScenario(pos, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)),
                          2.0, noise, vacant, range);
}

// Symmetric ties with probability p per pair, weights uniform in (0, 1].
inline SocialGraph symmetric_ties(std::size_t n, std::uint64_t seed,
                                  double p = 0.6) {
  Rng rng(seed);
  std::vector<Tie> ties;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) {
        const double w = 1.0 - uniform01(rng);
        ties.push_back({i, j, w});
        ties.push_back({j, i, w});
      }
    }
  }
  return SocialGraph(n, ties);
}

// Users on the x axis at the given coordinates, 0.1 W, alpha = 4,
// 1e-13 W noise on every channel.
inline SpectrumScenario line_scenario(const std::vector<double>& xs,
                                      std::size_t m,
                                      std::optional<double> range = {}) {
  std::vector<Eigen::Vector2d> pos;
  for (double x : xs) pos.emplace_back(x, 0.0);
  const auto n = static_cast<Eigen::Index>(xs.size());
  std::vector<std::vector<Channel>> vacant(xs.size());
  for (auto& v : vacant) {
    for (std::size_t c = 0; c < m; ++c) v.push_back(static_cast<Channel>(c));
  }
  return SpectrumScenario(pos, Eigen::VectorXd::Constant(n, 0.1), 4.0,
                          Eigen::MatrixXd::Constant(n, static_cast<Eigen::Index>(m), 1e-13),
                          vacant, range);
}

}  // namespace sgum::testing

#endif  // SGUM_TESTS_TEST_SUPPORT_HPP_
