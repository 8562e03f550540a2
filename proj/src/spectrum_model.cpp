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

#include "sgum/spectrum_model.hpp"

#include <algorithm>
#include <limits>

#include "sgum/errors.hpp"

namespace sgum {

std::string ChannelProfile::to_string() const {
  const bool digits = std::all_of(channels.begin(), channels.end(),
                                  [](Channel c) { return c >= 0 && c < 10; });
  std::string out;
  for (std::size_t n = 0; n < channels.size(); ++n) {
    if (!digits && n > 0) out += '-';
    out += std::to_string(channels[n]);
  }
  return out;
}

SpectrumScenario::SpectrumScenario(std::vector<Eigen::Vector2d> positions,
                                   Eigen::VectorXd powers, double alpha,
                                   Eigen::MatrixXd noise,
                                   std::vector<std::vector<Channel>> vacant,
                                   std::optional<double> interference_range)
    : positions_(std::move(positions)),
      powers_(std::move(powers)),
      alpha_(alpha),
      noise_(std::move(noise)),
      vacant_(std::move(vacant)),
      interference_range_(interference_range) {
  const auto n = static_cast<Eigen::Index>(positions_.size());
  if (n == 0) throw ValidationError("scenario needs at least one user");
  if (powers_.size() != n || noise_.rows() != n ||
      vacant_.size() != positions_.size()) {
    throw ValidationError("per-user arrays disagree on the user count");
  }
  if (noise_.cols() == 0) throw ValidationError("scenario needs channels");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw ValidationError("path-loss exponent must be positive");
  }
  if (!(powers_.array() > 0.0).all() || !powers_.allFinite()) {
    throw ValidationError("transmit powers must be positive");
  }
  if (!(noise_.array() > 0.0).all() || !noise_.allFinite()) {
    throw ValidationError("noise powers must be positive");
  }
  if (interference_range_ && !(*interference_range_ >= 0.0)) {
    throw ValidationError("interference range must be non-negative");
  }
  for (std::size_t u = 0; u < vacant_.size(); ++u) {
    auto& set = vacant_[u];
    if (set.empty()) {
      throw ValidationError("user " + std::to_string(u) +
                            " has no vacant channel");
    }
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw ValidationError("duplicate channel in vacant set of user " +
                            std::to_string(u));
    }
    if (set.front() < 0 || set.back() >= noise_.cols()) {
      throw ValidationError("vacant channel out of range for user " +
                            std::to_string(u));
    }
  }

  distance_.resize(n, n);
  gain_ = Eigen::MatrixXd::Zero(n, n);
  neighbors_.assign(positions_.size(), {});
  for (Eigen::Index i = 0; i < n; ++i) {
    distance_(i, i) = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (positions_[i] - positions_[j]).norm();
      if (!(d > 0.0)) {
        throw ValidationError("users " + std::to_string(i) + " and " +
                              std::to_string(j) + " share a position");
      }
      distance_(i, j) = d;
    }
  }
  for (Eigen::Index rx = 0; rx < n; ++rx) {
    for (Eigen::Index tx = 0; tx < n; ++tx) {
      if (tx == rx) continue;
      const double d = distance_(tx, rx);
      if (interference_range_ && d > *interference_range_) continue;
      gain_(tx, rx) = powers_(tx) * std::pow(d, -alpha_);
      neighbors_[rx].push_back(static_cast<std::size_t>(tx));
    }
  }
}

bool SpectrumScenario::is_vacant(std::size_t n, Channel c) const {
  const auto& set = vacant_[n];
  return std::binary_search(set.begin(), set.end(), c);
}

void validate_profile(const SpectrumScenario& s, const ChannelProfile& a) {
  if (a.size() != s.n_users()) {
    throw ValidationError("profile size does not match the user count");
  }
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!s.is_vacant(n, a[n])) {
      throw ValidationError("user " + std::to_string(n) + " on channel " +
                            std::to_string(a[n]) + " outside its vacant set");
    }
  }
}

std::vector<std::size_t> interference_neighbors(const SpectrumScenario& s,
                                                std::size_t n) {
  if (n >= s.n_users()) throw ValidationError("user index out of range");
  return s.neighbors(n);
}

std::vector<std::size_t> physical_social_neighbors(const SpectrumScenario& s,
                                                   const SocialGraph& g,
                                                   std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t m : interference_neighbors(s, n)) {
    if (g.weight(n, m) != 0.0) out.push_back(m);
  }
  return out;
}

double received_interference(const SpectrumScenario& s,
                             const ChannelProfile& a, std::size_t n) {
  double gamma = 0.0;
  for (std::size_t m : s.neighbors(n)) {
    if (a[m] == a[n]) gamma += s.gain(m, n);
  }
  return gamma + s.noise(n, a[n]);
}

double individual_utility(const SpectrumScenario& s, const ChannelProfile& a,
                          std::size_t n) {
  return -received_interference(s, a, n);
}

Eigen::VectorXd individual_utilities(const SpectrumScenario& s,
                                     const ChannelProfile& a) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(s.n_users()));
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    u(static_cast<Eigen::Index>(n)) = individual_utility(s, a, n);
  }
  return u;
}

double social_group_utility(const SpectrumScenario& s, const SocialGraph& g,
                            const ChannelProfile& a, std::size_t n) {
  if (g.n_users() != s.n_users()) {
    throw ValidationError("social graph and scenario disagree on user count");
  }
  double value = individual_utility(s, a, n);
  for (const auto& [m, w] : g.out_ties(n)) {
    value += w * individual_utility(s, a, m);
  }
  return value;
}

Potential potential(const SpectrumScenario& s, const SocialGraph& g,
                    const ChannelProfile& a) {
  if (g.n_users() != s.n_users()) {
    throw ValidationError("social graph and scenario disagree on user count");
  }
  double physical = 0.0;
  double social = 0.0;
  double noise = 0.0;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    for (std::size_t m : s.neighbors(n)) {
      if (a[m] != a[n]) continue;
      physical += s.gain(m, n);
      social += g.weight(n, m) * s.gain(m, n);
    }
    noise += s.noise(n, a[n]);
  }
  return {-0.5 * physical - noise, -0.5 * social};
}

double welfare(const SpectrumScenario& s, const ChannelProfile& a) {
  double v = 0.0;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    v += individual_utility(s, a, n);
  }
  return v;
}

PotentialGameConditions check_potential_game_conditions(
    const SpectrumScenario& s, const SocialGraph& g) {
  PotentialGameConditions c;
  const auto& p = s.powers();
  c.equal_powers = (p.array() == p(0)).all();
  c.symmetric_ties = g.n_users() == s.n_users() && g.is_symmetric();
  const Eigen::MatrixXd& gain = s.gain();
  const Eigen::MatrixXd linked = (gain.array() > 0.0).cast<double>().matrix();
  c.symmetric_interference = linked == linked.transpose();
  return c;
}

std::size_t profile_space_size(const SpectrumScenario& s) {
  std::size_t size = 1;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    const std::size_t k = s.vacant(n).size();
    if (size > std::numeric_limits<std::size_t>::max() / k) {
      return std::numeric_limits<std::size_t>::max();
    }
    size *= k;
  }
  return size;
}

ProfileSpace::ProfileSpace(const SpectrumScenario& s, std::size_t cap) {
  const std::size_t total = profile_space_size(s);
  if (total > cap) {
    throw CapacityError("profile space of " +
                        (total == std::numeric_limits<std::size_t>::max()
                             ? std::string("overflowing size")
                             : std::to_string(total)) +
                        " states exceeds the cap of " + std::to_string(cap));
  }
  const std::size_t n = s.n_users();
  vacant_.reserve(n);
  for (std::size_t u = 0; u < n; ++u) vacant_.push_back(s.vacant(u));
  stride_.assign(n, 1);
  for (std::size_t u = n; u-- > 1;) {
    stride_[u - 1] = stride_[u] * vacant_[u].size();
  }
  size_ = total;
}

std::size_t ProfileSpace::digit(std::size_t index, std::size_t n) const {
  return (index / stride_[n]) % vacant_[n].size();
}

ChannelProfile ProfileSpace::profile(std::size_t index) const {
  ChannelProfile a;
  a.channels.resize(vacant_.size());
  for (std::size_t n = 0; n < vacant_.size(); ++n) {
    a[n] = vacant_[n][digit(index, n)];
  }
  return a;
}

std::size_t ProfileSpace::index(const ChannelProfile& a) const {
  if (a.size() != vacant_.size()) {
    throw ValidationError("profile size does not match the user count");
  }
  std::size_t idx = 0;
  for (std::size_t n = 0; n < vacant_.size(); ++n) {
    const auto& set = vacant_[n];
    const auto it = std::lower_bound(set.begin(), set.end(), a[n]);
    if (it == set.end() || *it != a[n]) {
      throw ValidationError("profile channel outside vacant set");
    }
    idx += static_cast<std::size_t>(it - set.begin()) * stride_[n];
  }
  return idx;
}

ChannelProfile random_profile(const SpectrumScenario& s, Rng& rng) {
  ChannelProfile a;
  a.channels.resize(s.n_users());
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    const auto& set = s.vacant(n);
    a[n] = set[uniform_index(rng, set.size())];
  }
  return a;
}

SpectrumScenario random_scenario(const ScenarioParams& params,
                                 std::uint64_t seed) {
  if (params.n_users == 0 || params.n_channels == 0) {
    throw ValidationError("scenario needs users and channels");
  }
  if (!(params.side > 0.0)) throw ValidationError("side must be positive");
  if (params.noise_dbm_lo > params.noise_dbm_hi) {
    throw ValidationError("noise interval is reversed");
  }
  const std::size_t m = params.n_channels;
  const std::size_t vmin = params.vacant_min == 0 ? m : params.vacant_min;
  const std::size_t vmax = params.vacant_max == 0 ? m : params.vacant_max;
  if (vmin > vmax || vmax > m) {
    throw ValidationError("vacant set size bounds must satisfy 1 <= min <= "
                          "max <= n_channels");
  }
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(params.n_users);
  std::vector<Eigen::Vector2d> positions;
  positions.reserve(params.n_users);
  while (positions.size() < params.n_users) {
    Eigen::Vector2d p(uniform(rng, 0.0, params.side),
                      uniform(rng, 0.0, params.side));
    const bool clash = std::any_of(positions.begin(), positions.end(),
                                   [&](const auto& q) { return q == p; });
    if (!clash) positions.push_back(p);
  }
  Eigen::MatrixXd noise(n, static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < noise.rows(); ++i) {
    for (Eigen::Index c = 0; c < noise.cols(); ++c) {
      noise(i, c) = dbm_to_watts(
          uniform(rng, params.noise_dbm_lo, params.noise_dbm_hi));
    }
  }
  std::vector<std::vector<Channel>> vacant(params.n_users);
  for (auto& set : vacant) {
    const std::size_t k = vmin + uniform_index(rng, vmax - vmin + 1);
    std::vector<Channel> all(m);
    for (std::size_t c = 0; c < m; ++c) all[c] = static_cast<Channel>(c);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(all[i], all[i + uniform_index(rng, m - i)]);
    }
    set.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  }
  Eigen::VectorXd powers =
      Eigen::VectorXd::Constant(n, dbm_to_watts(params.power_dbm));
  return SpectrumScenario(std::move(positions), std::move(powers),
                          params.alpha, std::move(noise), std::move(vacant),
                          params.interference_range);
}

}  // namespace sgum
