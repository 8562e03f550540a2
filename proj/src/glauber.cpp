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

#include "sgum/glauber.hpp"

#include <charconv>
#include <limits>

#include "sgum/errors.hpp"
#include "sgum/random.hpp"

namespace sgum {
namespace {

// Full recomputation cadence for the running potential and welfare.
constexpr std::uint64_t kResyncInterval = 4096;

// Incremental chain state: the profile, each user's received interference
// and the users each transmitter interferes.
class ChainState {
 public:
  ChainState(const SpectrumScenario& s, const SocialGraph& g,
             ChannelProfile a)
      : s_(s), g_(g), a_(std::move(a)), victims_(s.n_users()) {
    for (std::size_t rx = 0; rx < s_.n_users(); ++rx) {
      for (std::size_t tx : s_.neighbors(rx)) victims_[tx].push_back(rx);
    }
    resync();
  }

  const ChannelProfile& profile() const { return a_; }
  double phi() const { return phi_; }
  double welfare() const { return welfare_; }

  // S_n(a_n = c, a_-n) - S_n(a).
  double social_delta(std::size_t n, Channel c) const {
    const Channel cur = a_[n];
    double interf = s_.noise(n, c);
    for (std::size_t m : s_.neighbors(n)) {
      if (a_[m] == c) interf += s_.gain(m, n);
    }
    double delta = -(interf - gamma_[n]);
    for (const auto& [m, w] : g_.out_ties(n)) {
      delta += w * victim_delta(n, m, cur, c);
    }
    return delta;
  }

  void move(std::size_t n, Channel c) {
    const Channel cur = a_[n];
    const double phi_delta = local_phi(n, c) - local_phi(n, cur);
    double welfare_delta = 0.0;

    double interf = s_.noise(n, c);
    for (std::size_t m : s_.neighbors(n)) {
      if (a_[m] == c) interf += s_.gain(m, n);
    }
    welfare_delta -= interf - gamma_[n];
    gamma_[n] = interf;
    for (std::size_t m : victims_[n]) {
      const double du = victim_delta(n, m, cur, c);
      gamma_[m] -= du;
      welfare_delta += du;
    }
    a_[n] = c;
    phi_ += phi_delta;
    welfare_ += welfare_delta;
    if (++moves_ % kResyncInterval == 0) resync();
  }

 private:
  // Change of U_m when transmitter n moves from `from` to `to`.
  double victim_delta(std::size_t n, std::size_t m, Channel from,
                      Channel to) const {
    const double gnm = s_.gain(n, m);
    if (gnm == 0.0) return 0.0;
    return -gnm * ((a_[m] == to ? 1.0 : 0.0) - (a_[m] == from ? 1.0 : 0.0));
  }

  // Terms of the potential that involve user k sitting on channel c.
  double local_phi(std::size_t k, Channel c) const {
    double pair = 0.0;
    for (std::size_t m : s_.neighbors(k)) {
      if (m != k && a_[m] == c) pair += (1.0 + g_.weight(k, m)) * s_.gain(m, k);
    }
    for (std::size_t n : victims_[k]) {
      if (n != k && a_[n] == c) pair += (1.0 + g_.weight(n, k)) * s_.gain(k, n);
    }
    return -0.5 * pair - s_.noise(k, c);
  }

  void resync() {
    gamma_.resize(s_.n_users());
    for (std::size_t n = 0; n < s_.n_users(); ++n) {
      gamma_[n] = received_interference(s_, a_, n);
    }
    phi_ = potential(s_, g_, a_).total();
    welfare_ = sgum::welfare(s_, a_);
  }

  const SpectrumScenario& s_;
  const SocialGraph& g_;
  ChannelProfile a_;
  std::vector<std::vector<std::size_t>> victims_;
  std::vector<double> gamma_;
  double phi_ = 0.0;
  double welfare_ = 0.0;
  std::uint64_t moves_ = 0;
};

void append_double(std::string& out, double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, end);
}

}  // namespace

Eigen::VectorXd resolve_rates(const Eigen::VectorXd& tau, std::size_t n_users) {
  const auto n = static_cast<Eigen::Index>(n_users);
  if (tau.size() == 0) return Eigen::VectorXd::Ones(n);
  if (tau.size() != n) {
    throw ValidationError("tau must have one rate per user");
  }
  if (!(tau.array() > 0.0).all() || !tau.allFinite()) {
    throw ValidationError("update rates must be positive and finite");
  }
  return tau;
}

ChainTrace simulate(const SpectrumScenario& s, const SocialGraph& g,
                    const ChainConfig& cfg, const ChannelProfile& a0) {
  validate_profile(s, a0);
  if (g.n_users() != s.n_users()) {
    throw ValidationError("social graph and scenario disagree on user count");
  }
  if (!(cfg.theta >= 0.0) || !std::isfinite(cfg.theta)) {
    throw ValidationError("theta must be finite and non-negative");
  }
  const auto& h = cfg.horizon;
  if (!h.max_time && !h.max_events) {
    throw ValidationError("chain horizon needs a time or event bound");
  }
  if (h.max_time && !(*h.max_time >= 0.0)) {
    throw ValidationError("horizon time must be non-negative");
  }
  const Eigen::VectorXd tau = resolve_rates(cfg.tau, s.n_users());
  const double total_rate = tau.sum();
  std::vector<double> cumulative(s.n_users());
  double acc = 0.0;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    acc += tau(static_cast<Eigen::Index>(n));
    cumulative[n] = acc / total_rate;
  }
  cumulative.back() = 1.0;

  Rng rng(cfg.seed);
  ChainState state(s, g, a0);
  ChainTrace trace;
  trace.initial = a0;
  trace.initial_phi = state.phi();
  trace.initial_welfare = state.welfare();

  const double max_time =
      h.max_time ? *h.max_time : std::numeric_limits<double>::infinity();
  const std::uint64_t max_events =
      h.max_events ? *h.max_events : std::numeric_limits<std::uint64_t>::max();
  double t = 0.0;
  while (trace.n_events < max_events) {
    const double next = t + exponential(rng, total_rate);
    if (next > max_time) {
      t = max_time;
      break;
    }
    t = next;
    const double u = uniform01(rng);
    std::size_t n = 0;
    while (cumulative[n] <= u) ++n;
    const auto& set = s.vacant(n);
    const Channel old_channel = state.profile()[n];
    const Channel proposal = set[uniform_index(rng, set.size())];
    bool accepted = true;
    if (proposal != old_channel) {
      const double delta = state.social_delta(n, proposal);
      const double p = acceptance_probability(delta, 0.0, cfg.theta);
      // One uniform per real proposal keeps the stream layout fixed.
      accepted = uniform01(rng) < p;
      if (accepted) state.move(n, proposal);
    }
    ++trace.n_events;
    if (cfg.record_events) {
      trace.events.push_back({t, static_cast<std::uint32_t>(n), old_channel,
                              proposal, accepted, state.phi(),
                              state.welfare()});
    }
  }
  trace.end_time = t;
  trace.final = state.profile();
  return trace;
}

std::string trace_csv(const ChainTrace& trace) {
  std::string out = "time,user,old,new,accepted,phi,welfare\n";
  out.reserve(out.size() + trace.events.size() * 64);
  for (const auto& e : trace.events) {
    append_double(out, e.time);
    out += ',' + std::to_string(e.user) + ',' + std::to_string(e.old_channel) +
           ',' + std::to_string(e.new_channel) + ',' +
           (e.accepted ? "1" : "0") + ',';
    append_double(out, e.phi);
    out += ',';
    append_double(out, e.welfare);
    out += '\n';
  }
  return out;
}

Eigen::VectorXd empirical_occupancy(const ChainTrace& trace,
                                    const ProfileSpace& space) {
  Eigen::VectorXd occ = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(space.size()));
  if (trace.events.empty()) {
    occ(static_cast<Eigen::Index>(space.index(trace.initial))) = 1.0;
    return occ;
  }
  ChannelProfile a = trace.initial;
  std::size_t idx = space.index(a);
  double last = 0.0;
  for (const auto& e : trace.events) {
    occ(static_cast<Eigen::Index>(idx)) += e.time - last;
    last = e.time;
    if (e.accepted && e.new_channel != e.old_channel) {
      a[e.user] = e.new_channel;
      idx = space.index(a);
    }
  }
  return occ / last;
}

std::optional<ConvergencePoint> events_to_convergence(const ChainTrace& trace,
                                                      double phi_star,
                                                      double allowed_loss,
                                                      std::size_t dwell) {
  if (allowed_loss < 0.0) throw ValidationError("allowed loss must be >= 0");
  const double slack = allowed_loss > 0.0 ? allowed_loss * std::abs(phi_star)
                                          : 1e-12 * std::abs(phi_star);
  const double floor = phi_star - slack;
  const std::size_t n = trace.events.size();
  // State k is the profile after k events; state 0 is the initial one.
  auto phi_at = [&](std::size_t k) {
    return k == 0 ? trace.initial_phi : trace.events[k - 1].phi;
  };
  std::size_t run = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (phi_at(k) >= floor) {
      if (++run > dwell) {
        const std::size_t start = k - dwell;
        return ConvergencePoint{
            start, start == 0 ? 0.0 : trace.events[start - 1].time};
      }
    } else {
      run = 0;
    }
  }
  return std::nullopt;
}

}  // namespace sgum
