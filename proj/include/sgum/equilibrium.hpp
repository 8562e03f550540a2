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

// Enumeration oracles for the spectrum access game: equilibrium checks,
// potential and welfare maximizers, and the finite-theta gap bounds.

#ifndef SGUM_EQUILIBRIUM_HPP_
#define SGUM_EQUILIBRIUM_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include "sgum/exact_chain.hpp"
#include "sgum/social_graph.hpp"
#include "sgum/spectrum_model.hpp"

namespace sgum {

// Default tolerance of is_sne, relative to max_n |U_n(a)|.
inline constexpr double kSneRelativeTolerance = 1e-6;

// True iff no user gains more than tol in social group utility by a
// unilateral switch, where tol = rel_tol * max_n |U_n(a)|.
bool is_sne(const SpectrumScenario& s, const SocialGraph& g,
            const ChannelProfile& a, double rel_tol = kSneRelativeTolerance);

struct Optima {
  ChannelProfile argmax_phi;
  double phi_star = 0.0;  // max Phi
  ChannelProfile argmax_welfare;
  double v_bar = 0.0;     // V(argmax_welfare)
  double phi_min = 0.0;
};

// Exhaustive search. Among profiles within 1e-12 (relative) of the maximum
// the lexicographically smallest is returned. phi_star is the exact
// maximum so that phi_star - Phi(a) >= 0 for every a.
Optima brute_force_optima(const SpectrumScenario& s, const SocialGraph& g,
                          std::size_t cap = ProfileSpace::kDefaultCap);

// sum_a q*_a Phi(a) and sum_a q*_a V(a).
double expected_potential(const ExactChain& chain);
double expected_welfare(const ExactChain& chain);

// 1/2 sum_n sum_{m in N^sp_n} (1 - w_nm) P_m d_mn^-alpha
//   + 1/2 sum_n sum_{m in N^p_n \ N^sp_n} P_m d_mn^-alpha.
double structural_gap_bound(const SpectrumScenario& s, const SocialGraph& g);

// sum_n ln |M_n|.
double log_strategy_count(const SpectrumScenario& s);

struct GapReport {
  double phi_star = 0.0;
  double phi_theta = 0.0;
  // sum_a q*_a (phi_star - Phi(a)), non-negative term by term.
  double phi_gap = 0.0;
  double theorem4_bound = 0.0;
  double v_bar = 0.0;
  double v_theta = 0.0;
  // sum_a q*_a (v_bar - V(a)).
  double rho_theta = 0.0;
  double theorem5_bound = 0.0;
  double structural_terms = 0.0;
  // theta -> infinity gap: V(argmax V) - V(argmax Phi).
  double rho_infinity = 0.0;
  bool theorem4_ok = false;
  bool theorem5_ok = false;
};

// Throws ValidationError when theta <= 0.
GapReport gap_report(const SpectrumScenario& s, const SocialGraph& g,
                     double theta, std::size_t cap = ProfileSpace::kDefaultCap);

// key=value lines, one field per line.
std::string to_text(const GapReport& r);

struct BenchmarkOptions {
  std::size_t cap = ProfileSpace::kDefaultCap;
  // Fallback when the profile space is too large: a long chain run at
  // theta = theta_scale / mean noise power, reporting the final profile.
  std::uint64_t fallback_events = 200000;
  double fallback_theta_scale = 1e3;
  std::uint64_t seed = 0;
};

struct BenchmarkProfiles {
  ChannelProfile ncg_sne;   // argmax Phi with no ties
  ChannelProfile sgum_sne;  // argmax Phi with g
  ChannelProfile num_opt;   // argmax V
  bool approximate = false;
};

BenchmarkProfiles benchmark_profiles(const SpectrumScenario& s,
                                     const SocialGraph& g,
                                     const BenchmarkOptions& opts = {});

}  // namespace sgum

#endif  // SGUM_EQUILIBRIUM_HPP_
