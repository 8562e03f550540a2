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

#ifndef SGUM_SPECTRUM_MODEL_HPP_
#define SGUM_SPECTRUM_MODEL_HPP_

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgum/random.hpp"
#include "sgum/social_graph.hpp"

namespace sgum {

using Channel = int;

// Joint channel selection; channels[n] is user n's channel.
struct ChannelProfile {
  std::vector<Channel> channels;

  std::size_t size() const { return channels.size(); }
  Channel operator[](std::size_t n) const { return channels[n]; }
  Channel& operator[](std::size_t n) { return channels[n]; }

  // Lexicographic, used for all tie-breaking.
  auto operator<=>(const ChannelProfile&) const = default;
  bool operator==(const ChannelProfile&) const = default;

  // Channel indices concatenated with no separator when every channel is
  // a single digit, otherwise joined with '-'.
  std::string to_string() const;
};

inline double dbm_to_watts(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

// The physical world of a white-space spectrum access network. Internal
// unit is the watt. Users interfere when their distance is at most
// `interference_range`; an empty range means every pair interferes.
class SpectrumScenario {
 public:
  SpectrumScenario(std::vector<Eigen::Vector2d> positions,
                   Eigen::VectorXd powers, double alpha, Eigen::MatrixXd noise,
                   std::vector<std::vector<Channel>> vacant,
                   std::optional<double> interference_range = std::nullopt);

  std::size_t n_users() const { return positions_.size(); }
  std::size_t n_channels() const {
    return static_cast<std::size_t>(noise_.cols());
  }

  const std::vector<Eigen::Vector2d>& positions() const { return positions_; }
  const Eigen::VectorXd& powers() const { return powers_; }
  double alpha() const { return alpha_; }
  // noise(n, c) is the background power user n sees on channel c.
  const Eigen::MatrixXd& noise() const { return noise_; }
  double noise(std::size_t n, Channel c) const {
    return noise_(static_cast<Eigen::Index>(n), c);
  }
  // Sorted ascending, non-empty.
  const std::vector<Channel>& vacant(std::size_t n) const { return vacant_[n]; }
  bool is_vacant(std::size_t n, Channel c) const;
  const std::optional<double>& interference_range() const {
    return interference_range_;
  }

  double distance(std::size_t m, std::size_t n) const {
    return distance_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  }

  // gain(m, n) = P_m d_mn^-alpha when m is an interference neighbour of n,
  // zero otherwise (including the diagonal).
  const Eigen::MatrixXd& gain() const { return gain_; }
  double gain(std::size_t m, std::size_t n) const {
    return gain_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  }

  const std::vector<std::size_t>& neighbors(std::size_t n) const {
    return neighbors_[n];
  }

 private:
  std::vector<Eigen::Vector2d> positions_;
  Eigen::VectorXd powers_;
  double alpha_;
  Eigen::MatrixXd noise_;
  std::vector<std::vector<Channel>> vacant_;
  std::optional<double> interference_range_;
  Eigen::MatrixXd distance_;
  Eigen::MatrixXd gain_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

// Throws ValidationError unless a has one vacant channel per user.
void validate_profile(const SpectrumScenario& s, const ChannelProfile& a);

// N_n^p: {m != n : d_mn <= range}, or every other user for a complete graph.
std::vector<std::size_t> interference_neighbors(const SpectrumScenario& s,
                                                std::size_t n);

// N_n^sp = N_n^s intersected with N_n^p.
std::vector<std::size_t> physical_social_neighbors(const SpectrumScenario& s,
                                                   const SocialGraph& g,
                                                   std::size_t n);

// gamma_n(a): co-channel interference plus background noise, in watts.
double received_interference(const SpectrumScenario& s,
                             const ChannelProfile& a, std::size_t n);

// U_n(a) = -gamma_n(a).
double individual_utility(const SpectrumScenario& s, const ChannelProfile& a,
                          std::size_t n);
Eigen::VectorXd individual_utilities(const SpectrumScenario& s,
                                     const ChannelProfile& a);

// S_n(a) = U_n(a) + sum_{m in N_n^s} w_nm U_m(a).
double social_group_utility(const SpectrumScenario& s, const SocialGraph& g,
                            const ChannelProfile& a, std::size_t n);

// Potential split into its physical and social coupling parts.
struct Potential {
  double physical = 0.0;
  double social = 0.0;
  double total() const { return physical + social; }
};

Potential potential(const SpectrumScenario& s, const SocialGraph& g,
                    const ChannelProfile& a);

// V(a) = sum_n U_n(a).
double welfare(const SpectrumScenario& s, const ChannelProfile& a);

// Preconditions under which the potential tracks every unilateral change
// of social group utility: equal powers, symmetric ties and symmetric
// interference relations.
struct PotentialGameConditions {
  bool equal_powers = false;
  bool symmetric_ties = false;
  bool symmetric_interference = false;
  bool ok() const {
    return equal_powers && symmetric_ties && symmetric_interference;
  }
};
PotentialGameConditions check_potential_game_conditions(
    const SpectrumScenario& s, const SocialGraph& g);

// Mixed-radix enumeration of Omega = prod_n M_n. User 0 is the most
// significant digit and vacant sets are sorted, so index order equals
// lexicographic profile order.
class ProfileSpace {
 public:
  static constexpr std::size_t kDefaultCap = 1'000'000;

  // Throws CapacityError when |Omega| > cap.
  explicit ProfileSpace(const SpectrumScenario& s,
                        std::size_t cap = kDefaultCap);

  std::size_t size() const { return size_; }
  ChannelProfile profile(std::size_t index) const;
  std::size_t index(const ChannelProfile& a) const;
  // Digit (position inside the vacant set) of user n in state `index`.
  std::size_t digit(std::size_t index, std::size_t n) const;
  std::size_t stride(std::size_t n) const { return stride_[n]; }

 private:
  std::vector<std::vector<Channel>> vacant_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
};

// |Omega| without enumerating, saturating at SIZE_MAX.
std::size_t profile_space_size(const SpectrumScenario& s);

// Uniformly random valid profile.
ChannelProfile random_profile(const SpectrumScenario& s, Rng& rng);

// Random scenario generator parameters; defaults mirror the 8-user
// white-space setup (100 mW, alpha = 4, noise in [-100, -90] dBm).
struct ScenarioParams {
  std::size_t n_users = 8;
  std::size_t n_channels = 5;
  double side = 500.0;  // square side in metres
  double power_dbm = 20.0;
  double alpha = 4.0;
  double noise_dbm_lo = -100.0;
  double noise_dbm_hi = -90.0;
  // Each user's vacant set is a uniform random subset whose size is
  // uniform in [vacant_min, vacant_max]; zero means n_channels.
  std::size_t vacant_min = 0;
  std::size_t vacant_max = 0;
  std::optional<double> interference_range;
};

SpectrumScenario random_scenario(const ScenarioParams& params,
                                 std::uint64_t seed);

}  // namespace sgum

#endif  // SGUM_SPECTRUM_MODEL_HPP_
