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

// Exact analytics of the spectrum access chain on enumerable state spaces:
// generator, Gibbs stationary law, reversibility residuals, mixing-time
// bounds and measurements, and the uniformized spectral gap.

#ifndef SGUM_EXACT_CHAIN_HPP_
#define SGUM_EXACT_CHAIN_HPP_

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sgum/errors.hpp"
#include "sgum/social_graph.hpp"
#include "sgum/spectrum_model.hpp"

namespace sgum {

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct ExactChain {
  ProfileSpace space;
  double theta = 0.0;
  Eigen::VectorXd tau;
  Eigen::VectorXd potential;  // Phi(a) per state
  Eigen::VectorXd welfare;    // V(a) per state
  // Q: off-diagonal rates for single-user moves, rows sum to zero.
  RowSparse generator;
  // log q_{a,a'} on the off-diagonal pattern of Q.
  RowSparse log_rates;
  Eigen::VectorXd log_stationary;
  Eigen::VectorXd stationary;
};

// Gibbs law exp(theta * value) / Z, normalized in log space.
Eigen::VectorXd gibbs_log_weights(const Eigen::VectorXd& values, double theta);
Eigen::VectorXd gibbs_distribution(const Eigen::VectorXd& values, double theta);

// Builds Q from social group utilities (q_{a,a'} = tau_n / |M_n| times the
// acceptance probability) and q* from the potential. Throws CapacityError
// when |Omega| exceeds `cap`.
ExactChain exact_chain(const SpectrumScenario& s, const SocialGraph& g,
                       double theta, const Eigen::VectorXd& tau = {},
                       std::size_t cap = ProfileSpace::kDefaultCap);

// max over transitions of |f_ab - f_ba| / max(f_ab, f_ba) with
// f_ab = q*_a q_{a,b}, evaluated in log space.
double detailed_balance_residual(const ExactChain& chain);

// ||q*^T Q||_inf and ||Q||_inf (max absolute row sum).
double stationarity_residual(const ExactChain& chain);
double generator_inf_norm(const ExactChain& chain);

// 1/2 sum |p - q|. Throws ValidationError on a length mismatch.
template <typename DerivedA, typename DerivedB>
double tv_distance(const Eigen::MatrixBase<DerivedA>& p,
                   const Eigen::MatrixBase<DerivedB>& q) {
  if (p.size() != q.size()) {
    throw ValidationError("tv_distance: length mismatch");
  }
  return 0.5 * (p - q).cwiseAbs().sum();
}

// Inputs of the closed-form mixing-time bounds.
struct MixingInputs {
  std::size_t n_users = 1;
  std::size_t m_min = 1;
  std::size_t m_max = 1;
  double tau_min = 1.0;
  double tau_max = 1.0;
  double phi_max = 0.0;
  double phi_min = 0.0;
};

struct MixingBounds {
  double general_bound = 0.0;
  // Present only when theta < theta_th.
  std::optional<double> coupled_bound;
  // +inf when the potential is constant and the log term is positive.
  double theta_th = 0.0;
};

// Evaluates both closed-form bounds exactly as stated:
//   general = N M_max^(2N+3) tau_max / (M_min tau_min^2) exp(4 theta D)
//             [2 ln(1/(2 eps)) + N ln M_max + theta D]
//   theta_th = ln(N M_min^2 tau_min / ((N-1) M_max tau_max)) / D
//   coupled = ln(N/eps) M_min/(M_max tau_max) exp(theta D)
//             / (M_min^2 tau_min/(M_max tau_max) + (1-N)/N exp(theta D))
// with D = Phi_max - Phi_min. Requires eps in (0, 1/2).
MixingBounds mixing_bounds(const MixingInputs& in, double theta,
                           double epsilon);

// Same, with Phi extremes found by enumeration.
MixingInputs mixing_inputs(const SpectrumScenario& s, const SocialGraph& g,
                           const Eigen::VectorXd& tau = {},
                           std::size_t cap = ProfileSpace::kDefaultCap);
MixingBounds mixing_bounds(const SpectrumScenario& s, const SocialGraph& g,
                           double theta, const Eigen::VectorXd& tau,
                           double epsilon,
                           std::size_t cap = ProfileSpace::kDefaultCap);

// Largest state count for dense transient and spectral computations.
inline constexpr std::size_t kDenseStateCap = 4096;

// max_{a0} TV(row a0 of exp(Q t), q*), via scaling-and-squaring.
double max_tv_to_stationary(const ExactChain& chain, double t);

// inf{ t >= 0 : max_tv_to_stationary(t) <= epsilon }, located by doubling
// and bisection to a relative width of 1e-9. Throws DomainError when the
// search passes 2^200 / ||Q||.
double measured_mixing_time(const ExactChain& chain, double epsilon);

// Same threshold for the uniformized discrete chain P = I + Q / xi with
// xi = N M_max tau_max / M_min: the first k with max TV(P^k) <= epsilon,
// reported as k / xi. Throws after `max_steps`.
double uniformized_mixing_time(const ExactChain& chain, double epsilon,
                               std::size_t max_steps = 1000000);

struct SpectralCheck {
  double xi = 0.0;         // uniformization rate N M_max tau_max / M_min
  double lambda2 = 0.0;    // second-largest eigenvalue of P = I + Q / xi
  double conductance = 0.0;  // min over transitions of q*_a q_{a,a'} / xi
  bool cheeger_ok = false;   // 1 - lambda2 >= conductance^2 / 2
};

SpectralCheck spectral_check(const ExactChain& chain);

// N M_max tau_max / M_min.
double uniformization_rate(const ExactChain& chain);

// Uniformized transition matrix P = I + Q / xi (dense).
Eigen::MatrixXd uniformized_matrix(const ExactChain& chain, double xi);

// CSV rows "profile,probability" in state order.
std::string stationary_csv(const ExactChain& chain);

}  // namespace sgum

#endif  // SGUM_EXACT_CHAIN_HPP_
