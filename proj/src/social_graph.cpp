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

#include "sgum/social_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sgum/errors.hpp"
#include "sgum/random.hpp"

namespace sgum {
namespace {

constexpr double kZeroSumTolerance = 1e-12;

void check_weight(double w, TieMode mode, const std::string& where) {
  if (!std::isfinite(w) || w == 0.0 || w > 1.0 ||
      (mode == TieMode::kStandard && w < 0.0)) {
    throw ValidationError(where + ": tie weight " + std::to_string(w) +
                          (mode == TieMode::kStandard
                               ? " outside (0, 1]"
                               : " outside (-inf, 1] \\ {0}"));
  }
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

SocialGraph::SocialGraph(std::size_t n_users, std::vector<Tie> ties,
                         TieMode mode)
    : n_users_(n_users),
      mode_(mode),
      ties_(std::move(ties)),
      rows_(n_users),
      dense_(Eigen::MatrixXd::Zero(n_users, n_users)) {
  std::sort(ties_.begin(), ties_.end(), [](const Tie& a, const Tie& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  for (std::size_t k = 0; k < ties_.size(); ++k) {
    const Tie& t = ties_[k];
    if (t.from >= n_users_ || t.to >= n_users_) {
      throw ValidationError("tie (" + std::to_string(t.from) + ", " +
                            std::to_string(t.to) + ") references a user >= " +
                            std::to_string(n_users_));
    }
    if (t.from == t.to) {
      throw ValidationError("self-tie on user " + std::to_string(t.from));
    }
    check_weight(t.weight, mode_,
                 "tie (" + std::to_string(t.from) + ", " +
                     std::to_string(t.to) + ")");
    if (k > 0 && ties_[k - 1].from == t.from && ties_[k - 1].to == t.to) {
      throw ValidationError("duplicate tie (" + std::to_string(t.from) +
                            ", " + std::to_string(t.to) + ")");
    }
    rows_[t.from].emplace_back(t.to, t.weight);
    dense_(static_cast<Eigen::Index>(t.from), static_cast<Eigen::Index>(t.to)) =
        t.weight;
  }
}

const std::vector<std::pair<std::size_t, double>>& SocialGraph::out_ties(
    std::size_t i) const {
  if (i >= n_users_) throw ValidationError("user index out of range");
  return rows_[i];
}

double SocialGraph::weight(std::size_t i, std::size_t j) const {
  if (i >= n_users_ || j >= n_users_) {
    throw ValidationError("user index out of range");
  }
  return dense_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

bool SocialGraph::is_symmetric(double tol) const {
  return (dense_ - dense_.transpose()).cwiseAbs().maxCoeff() <= tol ||
         n_users_ == 0;
}

SocialGraph empty_graph(std::size_t n) { return SocialGraph(n); }

SocialGraph complete_graph(std::size_t n, double tie_weight) {
  std::vector<Tie> ties;
  ties.reserve(n * (n > 0 ? n - 1 : 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) ties.push_back({i, j, tie_weight});
    }
  }
  return SocialGraph(n, std::move(ties));
}

SocialGraph er_graph(std::size_t n, double p_link, double tie_weight,
                     std::uint64_t seed) {
  if (!(p_link >= 0.0 && p_link <= 1.0)) {
    throw ValidationError("p_link must lie in [0, 1]");
  }
  check_weight(tie_weight, TieMode::kStandard, "er_graph");
  Rng rng(seed);
  std::vector<Tie> ties;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p_link) {
        ties.push_back({i, j, tie_weight});
        ties.push_back({j, i, tie_weight});
      }
    }
  }
  return SocialGraph(n, std::move(ties));
}

SocialGraph load_edge_list(std::string_view text,
                           const EdgeListOptions& options) {
  std::vector<Tie> ties;
  std::vector<std::size_t> tie_line;
  std::size_t max_index = 0;
  bool any = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = split_ws(line);
    if (tok.size() != 3) {
      throw ParseError(line_no, "expected \"i j w\", got \"" +
                                    std::string(line) + "\"");
    }
    std::size_t i = 0, j = 0;
    double w = 0.0;
    if (!parse_number(tok[0], i) || !parse_number(tok[1], j)) {
      throw ParseError(line_no, "user indices must be non-negative integers");
    }
    if (!parse_number(tok[2], w)) {
      throw ParseError(line_no, "malformed weight \"" + std::string(tok[2]) +
                                    "\"");
    }
    if (i == j) throw ParseError(line_no, "self-tie");
    try {
      check_weight(w, options.mode, "weight");
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    if (options.n_users && (i >= *options.n_users || j >= *options.n_users)) {
      throw ParseError(line_no, "user index exceeds n_users");
    }
    max_index = std::max({max_index, i, j});
    any = true;
    ties.push_back({i, j, w});
    tie_line.push_back(line_no);
    if (options.symmetrize) {
      ties.push_back({j, i, w});
      tie_line.push_back(line_no);
    }
  }

  // Duplicate directed pairs, reported at the later line.
  std::vector<std::size_t> order(ties.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(ties[a].from, ties[a].to) <
           std::pair(ties[b].from, ties[b].to);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Tie& a = ties[order[k - 1]];
    const Tie& b = ties[order[k]];
    if (a.from == b.from && a.to == b.to) {
      throw ParseError(std::max(tie_line[order[k - 1]], tie_line[order[k]]),
                       "duplicate directed pair (" + std::to_string(b.from) +
                           ", " + std::to_string(b.to) + ")");
    }
  }

  const std::size_t n =
      options.n_users ? *options.n_users : (any ? max_index + 1 : 0);
  return SocialGraph(n, std::move(ties), options.mode);
}

SocialGraph load_edge_list_file(const std::string& path,
                                const EdgeListOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open edge list " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str(), options);
}

std::string serialize_edge_list(const SocialGraph& g) {
  std::string out;
  char w[64];
  for (const Tie& t : g.ties()) {
    auto [end, ec] = std::to_chars(w, w + sizeof(w), t.weight,
                                   std::chars_format::general, 17);
    out += std::to_string(t.from) + ' ' + std::to_string(t.to) + ' ' +
           std::string(w, end) + '\n';
  }
  return out;
}

std::vector<std::size_t> social_group(const SocialGraph& g, std::size_t i) {
  std::vector<std::size_t> group;
  for (const auto& [j, w] : g.out_ties(i)) group.push_back(j);
  return group;
}

bool is_zero_sum(const SocialGraph& g) {
  if (g.mode() != TieMode::kGeneralized) {
    throw UsageError("zero-sum check requires a generalized-mode graph");
  }
  const Eigen::VectorXd incoming = g.weights().colwise().sum().transpose();
  for (Eigen::Index i = 0; i < incoming.size(); ++i) {
    if (std::abs(incoming(i) + 1.0) > kZeroSumTolerance) return false;
  }
  return true;
}

Eigen::VectorXd group_utilities(const SocialGraph& g,
                                const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (static_cast<std::size_t>(u.size()) != g.n_users()) {
    throw ValidationError("utility vector size does not match graph");
  }
  return u + g.weights() * u;
}

}  // namespace sgum
