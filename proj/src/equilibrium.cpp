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

#include "sgum/equilibrium.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "sgum/errors.hpp"
#include "sgum/glauber.hpp"

namespace sgum {
namespace {

constexpr double kArgmaxTolerance = 1e-12;

// Lexicographically smallest index whose value is within tolerance of the
// maximum. Index order is lexicographic profile order.
std::size_t first_near_max(const std::vector<double>& v, double max) {
  const double floor = max - kArgmaxTolerance * std::abs(max);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] >= floor) return k;
  }
  return 0;
}

void append_kv(std::string& out, const char* key, double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out += key;
  out += '=';
  out.append(buf, end);
  out += '\n';
}

}  // namespace

bool is_sne(const SpectrumScenario& s, const SocialGraph& g,
            const ChannelProfile& a, double rel_tol) {
  validate_profile(s, a);
  const Eigen::VectorXd u = individual_utilities(s, a);
  const double tol = rel_tol * u.cwiseAbs().maxCoeff();
  const Eigen::VectorXd base = group_utilities(g, u);
  ChannelProfile b = a;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    for (Channel c : s.vacant(n)) {
      if (c == a[n]) continue;
      b[n] = c;
      const double dev = social_group_utility(s, g, b, n);
      if (dev > base(static_cast<Eigen::Index>(n)) + tol) return false;
    }
    b[n] = a[n];
  }
  return true;
}

Optima brute_force_optima(const SpectrumScenario& s, const SocialGraph& g,
                          std::size_t cap) {
  const ProfileSpace space(s, cap);
  std::vector<double> phi(space.size());
  std::vector<double> v(space.size());
  double phi_max = -std::numeric_limits<double>::infinity();
  double phi_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < space.size(); ++k) {
    const ChannelProfile a = space.profile(k);
    phi[k] = potential(s, g, a).total();
    v[k] = welfare(s, a);
    phi_max = std::max(phi_max, phi[k]);
    phi_min = std::min(phi_min, phi[k]);
    v_max = std::max(v_max, v[k]);
  }
  Optima out;
  out.argmax_phi = space.profile(first_near_max(phi, phi_max));
  out.phi_star = phi_max;
  const std::size_t best_v = first_near_max(v, v_max);
  out.argmax_welfare = space.profile(best_v);
  out.v_bar = v[best_v];
  out.phi_min = phi_min;
  return out;
}

double expected_potential(const ExactChain& chain) {
  return chain.stationary.dot(chain.potential);
}

double expected_welfare(const ExactChain& chain) {
  return chain.stationary.dot(chain.welfare);
}

double structural_gap_bound(const SpectrumScenario& s, const SocialGraph& g) {
  double social = 0.0;
  double physical_only = 0.0;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    for (std::size_t m : interference_neighbors(s, n)) {
      // m is in N^sp_n exactly when the tie weight is nonzero.
      const double w = g.weight(n, m);
      if (w != 0.0) {
        social += (1.0 - w) * s.gain(m, n);
      } else {
        physical_only += s.gain(m, n);
      }
    }
  }
  return 0.5 * social + 0.5 * physical_only;
}

double log_strategy_count(const SpectrumScenario& s) {
  double total = 0.0;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    total += std::log(static_cast<double>(s.vacant(n).size()));
  }
  return total;
}

GapReport gap_report(const SpectrumScenario& s, const SocialGraph& g,
                     double theta, std::size_t cap) {
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  const Optima opt = brute_force_optima(s, g, cap);
  const ExactChain chain = exact_chain(s, g, theta, {}, cap);
  GapReport r;
  r.phi_star = opt.phi_star;
  r.phi_theta = expected_potential(chain);
  r.v_bar = opt.v_bar;
  r.v_theta = expected_welfare(chain);
  r.phi_gap = chain.stationary.dot(
      (opt.phi_star - chain.potential.array()).matrix());
  r.rho_theta =
      chain.stationary.dot((opt.v_bar - chain.welfare.array()).matrix());
  const double entropy_term = log_strategy_count(s) / theta;
  r.theorem4_bound = entropy_term;
  r.structural_terms = structural_gap_bound(s, g);
  r.theorem5_bound = entropy_term + r.structural_terms;
  r.rho_infinity = opt.v_bar - welfare(s, opt.argmax_phi);
  r.theorem4_ok = r.phi_gap >= 0.0 && r.phi_gap <= r.theorem4_bound;
  r.theorem5_ok = r.rho_theta <= r.theorem5_bound;
  return r;
}

std::string to_text(const GapReport& r) {
  std::string out;
  append_kv(out, "phi_star", r.phi_star);
  append_kv(out, "phi_theta", r.phi_theta);
  append_kv(out, "phi_gap", r.phi_gap);
  append_kv(out, "theorem4_bound", r.theorem4_bound);
  append_kv(out, "v_bar", r.v_bar);
  append_kv(out, "v_theta", r.v_theta);
  append_kv(out, "rho_theta", r.rho_theta);
  append_kv(out, "theorem5_bound", r.theorem5_bound);
  append_kv(out, "structural_terms", r.structural_terms);
  append_kv(out, "rho_infinity", r.rho_infinity);
  out += std::string("theorem4_ok=") + (r.theorem4_ok ? "true" : "false") + '\n';
  out += std::string("theorem5_ok=") + (r.theorem5_ok ? "true" : "false") + '\n';
  return out;
}

BenchmarkProfiles benchmark_profiles(const SpectrumScenario& s,
                                     const SocialGraph& g,
                                     const BenchmarkOptions& opts) {
  const SocialGraph none = empty_graph(s.n_users());
  BenchmarkProfiles out;
  try {
    const ProfileSpace probe(s, opts.cap);
    (void)probe;
  } catch (const CapacityError&) {
    out.approximate = true;
  }
  if (!out.approximate) {
    out.ncg_sne = brute_force_optima(s, none, opts.cap).argmax_phi;
    const Optima with_ties = brute_force_optima(s, g, opts.cap);
    out.sgum_sne = with_ties.argmax_phi;
    out.num_opt = with_ties.argmax_welfare;
    return out;
  }
  ChainConfig cfg;
  cfg.theta = opts.fallback_theta_scale / s.noise().mean();
  cfg.horizon.max_events = opts.fallback_events;
  cfg.record_events = false;
  Rng rng(derive_seed(opts.seed, 0));
  const ChannelProfile a0 = random_profile(s, rng);
  const SocialGraph full = complete_graph(s.n_users(), 1.0);
  cfg.seed = derive_seed(opts.seed, 1);
  out.ncg_sne = simulate(s, none, cfg, a0).final;
  cfg.seed = derive_seed(opts.seed, 2);
  out.sgum_sne = simulate(s, g, cfg, a0).final;
  cfg.seed = derive_seed(opts.seed, 3);
  out.num_opt = simulate(s, full, cfg, a0).final;
  return out;
}

}  // namespace sgum
