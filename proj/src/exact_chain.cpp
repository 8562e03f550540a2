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

#include "sgum/exact_chain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "sgum/glauber.hpp"

namespace sgum {
namespace {

constexpr double kReversibleTolerance = 1e-9;

double log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.array() - m).exp().sum());
}

void require_dense(const ExactChain& chain) {
  if (chain.space.size() > kDenseStateCap) {
    throw CapacityError("dense chain analysis limited to " +
                        std::to_string(kDenseStateCap) + " states, got " +
                        std::to_string(chain.space.size()));
  }
}

}  // namespace

double uniformization_rate(const ExactChain& chain) {
  const ProfileSpace& space = chain.space;
  const std::size_t n_users = static_cast<std::size_t>(chain.tau.size());
  std::size_t m_min = std::numeric_limits<std::size_t>::max();
  std::size_t m_max = 0;
  // Vacant-set sizes are recovered from the strides of the space.
  for (std::size_t n = 0; n < n_users; ++n) {
    const std::size_t above = n == 0 ? space.size() : space.stride(n - 1);
    const std::size_t m = above / space.stride(n);
    m_min = std::min(m_min, m);
    m_max = std::max(m_max, m);
  }
  return static_cast<double>(m_max) * chain.tau.maxCoeff() /
         static_cast<double>(m_min) * static_cast<double>(n_users);
}

Eigen::VectorXd gibbs_log_weights(const Eigen::VectorXd& values,
                                  double theta) {
  // Shift before scaling so huge theta keeps the maximizers at O(1).
  const double top = values.size() > 0 ? values.maxCoeff() : 0.0;
  const Eigen::VectorXd scaled =
      theta == 0.0 ? Eigen::VectorXd::Zero(values.size()).eval()
                   : (theta * (values.array() - top)).matrix().eval();
  return scaled.array() - log_sum_exp(scaled);
}

Eigen::VectorXd gibbs_distribution(const Eigen::VectorXd& values,
                                   double theta) {
  return gibbs_log_weights(values, theta).array().exp();
}

ExactChain exact_chain(const SpectrumScenario& s, const SocialGraph& g,
                       double theta, const Eigen::VectorXd& tau,
                       std::size_t cap) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw ValidationError("theta must be finite and non-negative");
  }
  if (g.n_users() != s.n_users()) {
    throw ValidationError("social graph and scenario disagree on user count");
  }
  ExactChain chain{ProfileSpace(s, cap), 0.0, {}, {}, {}, {}, {}, {}, {}};
  const ProfileSpace& space = chain.space;
  chain.theta = theta;
  chain.tau = resolve_rates(tau, s.n_users());
  const auto n_states = static_cast<Eigen::Index>(space.size());
  const std::size_t n_users = s.n_users();

  // Social group utilities of every user in every state.
  Eigen::MatrixXd social(n_states, static_cast<Eigen::Index>(n_users));
  chain.potential.resize(n_states);
  chain.welfare.resize(n_states);
  for (Eigen::Index k = 0; k < n_states; ++k) {
    const ChannelProfile a = space.profile(static_cast<std::size_t>(k));
    const Eigen::VectorXd u = individual_utilities(s, a);
    social.row(k) = group_utilities(g, u).transpose();
    chain.potential(k) = potential(s, g, a).total();
    chain.welfare(k) = u.sum();
  }

  std::vector<Eigen::Triplet<double>> rates;
  std::vector<Eigen::Triplet<double>> log_rates;
  std::vector<double> exit(static_cast<std::size_t>(n_states), 0.0);
  for (Eigen::Index k = 0; k < n_states; ++k) {
    const auto from = static_cast<std::size_t>(k);
    for (std::size_t n = 0; n < n_users; ++n) {
      const std::size_t m_n = s.vacant(n).size();
      const std::size_t cur = space.digit(from, n);
      const double base =
          std::log(chain.tau(static_cast<Eigen::Index>(n)) /
                   static_cast<double>(m_n));
      for (std::size_t d = 0; d < m_n; ++d) {
        if (d == cur) continue;
        const std::size_t to = from - cur * space.stride(n) + d * space.stride(n);
        const auto col = static_cast<Eigen::Index>(to);
        const double delta =
            social(col, static_cast<Eigen::Index>(n)) -
            social(k, static_cast<Eigen::Index>(n));
        const double log_rate = base + theta * std::min(0.0, delta);
        const double rate = std::exp(log_rate);
        rates.emplace_back(k, col, rate);
        log_rates.emplace_back(k, col, log_rate);
        exit[from] += rate;
      }
    }
    rates.emplace_back(k, k, -exit[from]);
  }
  chain.generator.resize(n_states, n_states);
  chain.generator.setFromTriplets(rates.begin(), rates.end());
  chain.log_rates.resize(n_states, n_states);
  chain.log_rates.setFromTriplets(log_rates.begin(), log_rates.end());
  chain.log_stationary = gibbs_log_weights(chain.potential, theta);
  chain.stationary = chain.log_stationary.array().exp();
  return chain;
}

double detailed_balance_residual(const ExactChain& chain) {
  const RowSparse& lr = chain.log_rates;
  double worst = 0.0;
  for (Eigen::Index a = 0; a < lr.outerSize(); ++a) {
    for (RowSparse::InnerIterator it(lr, a); it; ++it) {
      const Eigen::Index b = it.col();
      if (b <= a) continue;
      const double forward = chain.log_stationary(a) + it.value();
      const double backward = chain.log_stationary(b) + lr.coeff(b, a);
      const double diff = std::abs(forward - backward);
      worst = std::max(worst, -std::expm1(-diff));
    }
  }
  return worst;
}

double stationarity_residual(const ExactChain& chain) {
  const Eigen::VectorXd flow =
      chain.generator.transpose() * chain.stationary;
  return flow.cwiseAbs().maxCoeff();
}

double generator_inf_norm(const ExactChain& chain) {
  double norm = 0.0;
  for (Eigen::Index a = 0; a < chain.generator.outerSize(); ++a) {
    double row = 0.0;
    for (RowSparse::InnerIterator it(chain.generator, a); it; ++it) {
      row += std::abs(it.value());
    }
    norm = std::max(norm, row);
  }
  return norm;
}

MixingBounds mixing_bounds(const MixingInputs& in, double theta,
                           double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ValidationError("epsilon must lie in (0, 1/2)");
  }
  if (!(theta >= 0.0)) throw ValidationError("theta must be non-negative");
  if (in.n_users == 0 || in.m_min == 0 || in.m_min > in.m_max ||
      !(in.tau_min > 0.0) || in.tau_min > in.tau_max ||
      in.phi_max < in.phi_min) {
    throw ValidationError("inconsistent mixing-bound inputs");
  }
  const double n = static_cast<double>(in.n_users);
  const double m_min = static_cast<double>(in.m_min);
  const double m_max = static_cast<double>(in.m_max);
  const double spread = in.phi_max - in.phi_min;

  MixingBounds out;
  out.general_bound =
      n * std::pow(m_max, 2.0 * n + 3.0) * in.tau_max /
      (m_min * in.tau_min * in.tau_min) * std::exp(4.0 * theta * spread) *
      (2.0 * std::log(1.0 / (2.0 * epsilon)) + n * std::log(m_max) +
       theta * spread);

  const double ratio = m_min * m_min * in.tau_min / (m_max * in.tau_max);
  const double log_term = in.n_users == 1
                              ? std::numeric_limits<double>::infinity()
                              : std::log(n * ratio / (n - 1.0));
  if (spread > 0.0) {
    out.theta_th = log_term / spread;
  } else {
    out.theta_th = log_term > 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
  }
  if (theta < out.theta_th) {
    const double e = std::exp(theta * spread);
    const double denom = ratio + (1.0 - n) / n * e;
    out.coupled_bound = std::log(n / epsilon) * m_min / (m_max * in.tau_max) *
                        e / denom;
  }
  return out;
}

MixingInputs mixing_inputs(const SpectrumScenario& s, const SocialGraph& g,
                           const Eigen::VectorXd& tau, std::size_t cap) {
  const ProfileSpace space(s, cap);
  const Eigen::VectorXd rates = resolve_rates(tau, s.n_users());
  MixingInputs in;
  in.n_users = s.n_users();
  in.m_min = std::numeric_limits<std::size_t>::max();
  in.m_max = 0;
  for (std::size_t n = 0; n < s.n_users(); ++n) {
    in.m_min = std::min(in.m_min, s.vacant(n).size());
    in.m_max = std::max(in.m_max, s.vacant(n).size());
  }
  in.tau_min = rates.minCoeff();
  in.tau_max = rates.maxCoeff();
  in.phi_max = -std::numeric_limits<double>::infinity();
  in.phi_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < space.size(); ++k) {
    const double phi = potential(s, g, space.profile(k)).total();
    in.phi_max = std::max(in.phi_max, phi);
    in.phi_min = std::min(in.phi_min, phi);
  }
  return in;
}

MixingBounds mixing_bounds(const SpectrumScenario& s, const SocialGraph& g,
                           double theta, const Eigen::VectorXd& tau,
                           double epsilon, std::size_t cap) {
  return mixing_bounds(mixing_inputs(s, g, tau, cap), theta, epsilon);
}

double max_tv_to_stationary(const ExactChain& chain, double t) {
  require_dense(chain);
  const Eigen::MatrixXd q = Eigen::MatrixXd(chain.generator) * t;
  const Eigen::MatrixXd transient = q.exp();
  double worst = 0.0;
  for (Eigen::Index a = 0; a < transient.rows(); ++a) {
    worst = std::max(
        worst, tv_distance(transient.row(a).transpose(), chain.stationary));
  }
  return worst;
}

double measured_mixing_time(const ExactChain& chain, double epsilon) {
  require_dense(chain);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  if (max_tv_to_stationary(chain, 0.0) <= epsilon) return 0.0;
  const double rate = generator_inf_norm(chain);
  double lo = 0.0;
  double hi = rate > 0.0 ? 1.0 / rate : 1.0;
  int doublings = 0;
  while (max_tv_to_stationary(chain, hi) > epsilon) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) {
      throw DomainError("mixing time beyond the resolvable range");
    }
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (max_tv_to_stationary(chain, mid) > epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Eigen::MatrixXd uniformized_matrix(const ExactChain& chain, double xi) {
  require_dense(chain);
  const auto n = static_cast<Eigen::Index>(chain.space.size());
  return Eigen::MatrixXd::Identity(n, n) + Eigen::MatrixXd(chain.generator) / xi;
}

double uniformized_mixing_time(const ExactChain& chain, double epsilon,
                               std::size_t max_steps) {
  require_dense(chain);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  const double xi = uniformization_rate(chain);
  const Eigen::MatrixXd p = uniformized_matrix(chain, xi);
  const auto n = p.rows();
  Eigen::MatrixXd law = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t k = 0; k <= max_steps; ++k) {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      worst = std::max(worst,
                       tv_distance(law.row(a).transpose(), chain.stationary));
    }
    if (worst <= epsilon) return static_cast<double>(k) / xi;
    law = (law * p).eval();
  }
  throw std::runtime_error("uniformized chain did not mix within max_steps");
}

SpectralCheck spectral_check(const ExactChain& chain) {
  require_dense(chain);
  const ProfileSpace& space = chain.space;
  SpectralCheck out;
  out.xi = uniformization_rate(chain);

  const auto n = static_cast<Eigen::Index>(space.size());
  const double log_xi = std::log(out.xi);
  double log_conductance = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (RowSparse::InnerIterator it(chain.log_rates, a); it; ++it) {
      log_conductance = std::min(
          log_conductance, chain.log_stationary(a) + it.value() - log_xi);
    }
  }
  out.conductance = std::isfinite(log_conductance) ? std::exp(log_conductance)
                                                   : 0.0;
  if (n < 2) {
    out.lambda2 = 0.0;
    out.cheeger_ok = true;
    return out;
  }

  const Eigen::MatrixXd p = uniformized_matrix(chain, out.xi);
  Eigen::VectorXd eig;
  if (detailed_balance_residual(chain) <= kReversibleTolerance) {
    // D^{1/2} P D^{-1/2} with D = diag(q*), formed in log space.
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      sym(a, a) = p(a, a);
      for (RowSparse::InnerIterator it(chain.log_rates, a); it; ++it) {
        const Eigen::Index b = it.col();
        sym(a, b) = std::exp(it.value() - log_xi +
                             0.5 * (chain.log_stationary(a) -
                                    chain.log_stationary(b)));
      }
    }
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        sym, Eigen::EigenvaluesOnly);
    eig = solver.eigenvalues();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(p, false);
    eig = solver.eigenvalues().real();
    std::sort(eig.data(), eig.data() + eig.size());
  }
  out.lambda2 = eig(n - 2);
  out.cheeger_ok =
      1.0 - out.lambda2 >= 0.5 * out.conductance * out.conductance;
  return out;
}

std::string stationary_csv(const ExactChain& chain) {
  std::string out = "profile,probability\n";
  char buf[64];
  for (std::size_t k = 0; k < chain.space.size(); ++k) {
    out += chain.space.profile(k).to_string();
    out += ',';
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf),
                                   chain.stationary(static_cast<Eigen::Index>(k)),
                                   std::chars_format::general, 17);
    out.append(buf, end);
    out += '\n';
  }
  return out;
}

}  // namespace sgum
