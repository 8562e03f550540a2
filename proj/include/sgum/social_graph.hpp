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

#ifndef SGUM_SOCIAL_GRAPH_HPP_
#define SGUM_SOCIAL_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sgum {

// Standard ties live in (0, 1]. Generalized ties live in (-inf, 1] \ {0}
// and model adversarial or spiteful relations.
enum class TieMode { kStandard, kGeneralized };

struct Tie {
  std::size_t from;
  std::size_t to;
  double weight;
};

// Weighted, directed social ties among `n_users` users. Absent pairs have
// weight zero; explicit zeros are rejected so the representation stays
// canonical. Immutable after construction.
class SocialGraph {
 public:
  explicit SocialGraph(std::size_t n_users, std::vector<Tie> ties = {},
                       TieMode mode = TieMode::kStandard);

  std::size_t n_users() const { return n_users_; }
  TieMode mode() const { return mode_; }
  std::size_t num_ties() const { return ties_.size(); }

  // Sorted by (from, to).
  const std::vector<Tie>& ties() const { return ties_; }

  // Outgoing ties of user i as (j, w_ij), sorted by j.
  const std::vector<std::pair<std::size_t, double>>& out_ties(
      std::size_t i) const;

  double weight(std::size_t i, std::size_t j) const;

  // Dense n x n weight matrix, W(i, j) = w_ij.
  const Eigen::MatrixXd& weights() const { return dense_; }

  bool is_symmetric(double tol = 0.0) const;

 private:
  std::size_t n_users_;
  TieMode mode_;
  std::vector<Tie> ties_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  Eigen::MatrixXd dense_;
};

SocialGraph empty_graph(std::size_t n);
SocialGraph complete_graph(std::size_t n, double tie_weight = 1.0);

// Erdos-Renyi graph. Unordered pairs (i < j) are visited in lexicographic
// order and each draws one uniform u; the pair is tied (both directions,
// weight `tie_weight`) iff u < p_link. Graphs from one seed are therefore
// nested in p_link.
SocialGraph er_graph(std::size_t n, double p_link, double tie_weight,
                     std::uint64_t seed);

struct EdgeListOptions {
  bool symmetrize = false;
  TieMode mode = TieMode::kStandard;
  // When empty, the user count is one past the largest index seen.
  std::optional<std::size_t> n_users;
};

// Parses "i j w" lines (0-indexed, whitespace separated). Blank lines and
// lines starting with '#' are skipped. Parsing is locale-independent.
SocialGraph load_edge_list(std::string_view text,
                           const EdgeListOptions& options = {});
SocialGraph load_edge_list_file(const std::string& path,
                                const EdgeListOptions& options = {});

// One "i j w" line per tie sorted by (i, j), weights at 17 significant
// digits.
std::string serialize_edge_list(const SocialGraph& g);

// N_i^s = { j : w_ij != 0 }, ascending.
std::vector<std::size_t> social_group(const SocialGraph& g, std::size_t i);

// True iff every user's incoming generalized weights sum to -1 (1e-12).
// Throws UsageError on a standard-mode graph.
bool is_zero_sum(const SocialGraph& g);

// S_i = U_i + sum_j w_ij U_j for every i.
Eigen::VectorXd group_utilities(const SocialGraph& g,
                                const Eigen::Ref<const Eigen::VectorXd>& u);

}  // namespace sgum

#endif  // SGUM_SOCIAL_GRAPH_HPP_
