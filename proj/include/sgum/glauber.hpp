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

// Continuous-time randomized spectrum access. Every user runs an
// exponential timer with rate tau_n; on expiry it proposes a channel
// uniformly from its vacant set (the current one included) and keeps the
// proposal with probability exp(theta * min(0, S_new - S_old)).

#ifndef SGUM_GLAUBER_HPP_
#define SGUM_GLAUBER_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgum/social_graph.hpp"
#include "sgum/spectrum_model.hpp"

namespace sgum {

// exp(theta * S_new) / max(exp(theta * S_new), exp(theta * S_old)),
// evaluated as exp(theta * min(0, S_new - S_old)) so it never overflows.
// Requires theta >= 0.
template <typename Scalar>
Scalar acceptance_probability(Scalar s_new, Scalar s_old, Scalar theta) {
  using std::exp;
  using std::min;
  return exp(theta * min(Scalar(0), s_new - s_old));
}

// Either bound may be set; the run stops at whichever is hit first.
struct ChainHorizon {
  std::optional<double> max_time;
  std::optional<std::uint64_t> max_events;
};

struct ChainConfig {
  double theta = 0.0;
  // Per-user update rates; empty means 1 for every user.
  Eigen::VectorXd tau;
  ChainHorizon horizon;
  std::uint64_t seed = 0;
  // Keep per-event records. Summary fields are filled either way.
  bool record_events = true;
};

struct ChainEvent {
  double time;
  std::uint32_t user;
  Channel old_channel;
  Channel new_channel;
  // Self-proposals are recorded as accepted with old == new.
  bool accepted;
  double phi;
  double welfare;
};

struct ChainTrace {
  ChannelProfile initial;
  ChannelProfile final;
  double initial_phi = 0.0;
  double initial_welfare = 0.0;
  std::vector<ChainEvent> events;
  std::uint64_t n_events = 0;
  double end_time = 0.0;
};

// Resolves cfg.tau against the user count and validates it.
Eigen::VectorXd resolve_rates(const Eigen::VectorXd& tau, std::size_t n_users);

// Event-driven simulation of the chain. The next event time is
// Exponential(sum tau), the updating user is n with probability
// tau_n / sum tau. Deterministic given cfg.seed.
ChainTrace simulate(const SpectrumScenario& s, const SocialGraph& g,
                    const ChainConfig& cfg, const ChannelProfile& a0);

// CSV columns: time,user,old,new,accepted,phi,welfare.
std::string trace_csv(const ChainTrace& trace);

// Fraction of simulated time spent in each state of `space`, replaying the
// recorded events from the initial profile up to the last event.
Eigen::VectorXd empirical_occupancy(const ChainTrace& trace,
                                    const ProfileSpace& space);

struct ConvergencePoint {
  std::uint64_t events = 0;  // events elapsed when the dwell window opened
  double time = 0.0;
};

// First point after which the running potential stays at or above
// phi_star - allowed_loss * |phi_star| for `dwell` consecutive events.
// A zero loss uses a 1e-12 relative slack for rounding. Empty if the
// trace ends first.
std::optional<ConvergencePoint> events_to_convergence(const ChainTrace& trace,
                                                      double phi_star,
                                                      double allowed_loss,
                                                      std::size_t dwell = 100);

}  // namespace sgum

#endif  // SGUM_GLAUBER_HPP_
