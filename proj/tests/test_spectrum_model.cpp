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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "sgum/errors.hpp"
#include "sgum/spectrum_model.hpp"
#include "test_support.hpp"

using namespace sgum;
using sgum::testing::line_scenario;
using sgum::testing::symmetric_ties;
using sgum::testing::unit_scenario;

namespace {

ChannelProfile profile(std::vector<Channel> c) { return ChannelProfile{std::move(c)}; }

}  // namespace

TEST_CASE("dBm conversion") {
  CHECK(dbm_to_watts(20.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(dbm_to_watts(-100.0) == doctest::Approx(1e-13).epsilon(1e-15));
  CHECK(dbm_to_watts(30.0) == 1.0);
}

TEST_CASE("interference neighbours") {
  CHECK(line_scenario({0.0, 600.0}, 1, 500.0).neighbors(0).empty());
  CHECK(line_scenario({0.0, 400.0}, 1, 500.0).neighbors(0) ==
        std::vector<std::size_t>{1});
  const SpectrumScenario s = line_scenario({0.0, 300.0, 700.0}, 1, 500.0);
  CHECK(interference_neighbors(s, 1) == std::vector<std::size_t>{0, 2});
  CHECK(interference_neighbors(s, 0) == std::vector<std::size_t>{1});
  // No range: every other user.
  CHECK(line_scenario({0.0, 300.0, 7000.0}, 1).neighbors(0) ==
        std::vector<std::size_t>{1, 2});
}

TEST_CASE("received interference") {
  const SpectrumScenario one = line_scenario({0.0, 100.0}, 2);
  CHECK(received_interference(one, profile({0, 1}), 0) == 1e-13);
  CHECK(received_interference(one, profile({1, 1}), 0) ==
        doctest::Approx(1e-9 + 1e-13).epsilon(1e-14));
  const SpectrumScenario two = line_scenario({0.0, 100.0, -200.0}, 2);
  CHECK(received_interference(two, profile({0, 0, 0}), 0) ==
        doctest::Approx(1e-9 + 6.25e-11 + 1e-13).epsilon(1e-14));
  CHECK(individual_utility(one, profile({1, 1}), 0) ==
        doctest::Approx(-(1e-9 + 1e-13)).epsilon(1e-14));
}

TEST_CASE("utilities are negative and isolated users pay only noise") {
  const SpectrumScenario s = unit_scenario(4, 3, 17);
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const ChannelProfile a = random_profile(s, rng);
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(individual_utility(s, a, n) < 0.0);
      CHECK(received_interference(s, a, n) >= s.noise(n, a[n]));
    }
  }
  const SpectrumScenario lone = line_scenario({0.0}, 2);
  CHECK(individual_utility(lone, profile({1}), 0) == -1e-13);
  CHECK(welfare(lone, profile({1})) == -1e-13);
}

TEST_CASE("social group utility degenerations") {
  const SpectrumScenario s = unit_scenario(3, 2, 4, true);
  const ChannelProfile a = profile({0, 0, 1});
  const Eigen::VectorXd u = individual_utilities(s, a);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(social_group_utility(s, empty_graph(3), a, n) ==
          u(static_cast<Eigen::Index>(n)));
    CHECK(social_group_utility(s, complete_graph(3), a, n) ==
          doctest::Approx(u.sum()).epsilon(1e-14));
  }
  const SocialGraph half(3, {{0, 1, 0.5}});
  CHECK(social_group_utility(s, half, a, 0) ==
        doctest::Approx(u(0) + 0.5 * u(1)).epsilon(1e-14));
}

TEST_CASE("potential decomposition") {
  const SpectrumScenario s = unit_scenario(4, 3, 8, true);
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const ChannelProfile a = random_profile(s, rng);
    CHECK(potential(s, empty_graph(4), a).social == 0.0);
  }
  // All channels distinct: only noise remains.
  const SpectrumScenario d = unit_scenario(3, 3, 9, true);
  const ChannelProfile distinct = profile({0, 1, 2});
  const double noise = d.noise(0, 0) + d.noise(1, 1) + d.noise(2, 2);
  CHECK(potential(d, complete_graph(3), distinct).total() ==
        doctest::Approx(-noise).epsilon(1e-14));
  CHECK(welfare(d, distinct) == doctest::Approx(-noise).epsilon(1e-14));
}

TEST_CASE("complete graph with unit ties makes the potential equal welfare") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const SpectrumScenario s = unit_scenario(n, 3, seed, true);
    const SocialGraph g = complete_graph(n, 1.0);
    const ProfileSpace space(s);
    for (std::size_t k = 0; k < space.size(); ++k) {
      const ChannelProfile a = space.profile(k);
      const double v = welfare(s, a);
      CHECK(std::abs(potential(s, g, a).total() - v) <= 1e-12 * std::abs(v));
    }
  }
}

TEST_CASE("welfare is the sum of individual utilities") {
  const SpectrumScenario s = unit_scenario(5, 3, 21);
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const ChannelProfile a = random_profile(s, rng);
    double sum = 0.0;
    for (std::size_t n = 0; n < 5; ++n) {
      double gamma = s.noise(n, a[n]);
      for (std::size_t m = 0; m < 5; ++m) {
        if (m == n || a[m] != a[n]) continue;
        gamma += s.powers()(static_cast<Eigen::Index>(m)) *
                 std::pow((s.positions()[m] - s.positions()[n]).norm(), -2.0);
      }
      sum -= gamma;
    }
    CHECK(welfare(s, a) == doctest::Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("potential-game identity on compliant instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpectrumScenario s = unit_scenario(4, 3, seed);
    const SocialGraph g = symmetric_ties(4, seed);
    const auto cond = check_potential_game_conditions(s, g);
    REQUIRE(cond.equal_powers);
    REQUIRE(cond.symmetric_ties);
    REQUIRE(cond.symmetric_interference);
    const ProfileSpace space(s);
    for (std::size_t k = 0; k < space.size(); ++k) {
      const ChannelProfile a = space.profile(k);
      for (std::size_t n = 0; n < 4; ++n) {
        for (Channel c : s.vacant(n)) {
          ChannelProfile b = a;
          b[n] = c;
          const double ds = social_group_utility(s, g, b, n) -
                            social_group_utility(s, g, a, n);
          const double dphi =
              potential(s, g, b).total() - potential(s, g, a).total();
          const double scale = std::abs(potential(s, g, a).total());
          CHECK(std::abs(ds - dphi) <= 1e-9 * scale);
        }
      }
    }
  }
}

TEST_CASE("potential-game conditions detect violations") {
  const SpectrumScenario s = unit_scenario(3, 2, 5);
  CHECK_FALSE(check_potential_game_conditions(s, SocialGraph(3, {{0, 1, 0.5}}))
                  .symmetric_ties);
  std::vector<Eigen::Vector2d> pos = s.positions();
  Eigen::VectorXd powers(3);
  powers << 1.0, 2.0, 1.0;
  const SpectrumScenario unequal(pos, powers, 2.0, s.noise(),
                                 {{0, 1}, {0, 1}, {0, 1}});
  CHECK_FALSE(check_potential_game_conditions(unequal, empty_graph(3)).equal_powers);
}

TEST_CASE("interference is symmetric under equal powers") {
  const SpectrumScenario s = unit_scenario(5, 2, 13);
  for (std::size_t m = 0; m < 5; ++m) {
    for (std::size_t n = 0; n < 5; ++n) CHECK(s.gain(m, n) == s.gain(n, m));
  }
}

TEST_CASE("scenario validation") {
  const std::vector<Eigen::Vector2d> pos = {{0.0, 0.0}, {1.0, 0.0}};
  const Eigen::VectorXd p = Eigen::VectorXd::Ones(2);
  const Eigen::MatrixXd w = Eigen::MatrixXd::Constant(2, 2, 1e-13);
  const std::vector<std::vector<Channel>> ok = {{0}, {0, 1}};
  CHECK_NOTHROW(SpectrumScenario(pos, p, 4.0, w, ok));
  CHECK_THROWS_AS(SpectrumScenario({{0.0, 0.0}, {0.0, 0.0}}, p, 4.0, w, ok),
                  ValidationError);
  CHECK_THROWS_AS(SpectrumScenario(pos, p, 4.0, w, {{}, {0}}), ValidationError);
  CHECK_THROWS_AS(SpectrumScenario(pos, p, 4.0, w, {{0}, {2}}), ValidationError);
  CHECK_THROWS_AS(SpectrumScenario(pos, p, 4.0, w, {{0, 0}, {1}}), ValidationError);
  CHECK_THROWS_AS(SpectrumScenario(pos, -p, 4.0, w, ok), ValidationError);
  CHECK_THROWS_AS(SpectrumScenario(pos, p, 0.0, w, ok), ValidationError);
  CHECK_THROWS_AS(SpectrumScenario(pos, p, 4.0, -w, ok), ValidationError);
  const SpectrumScenario s(pos, p, 4.0, w, ok);
  CHECK_THROWS_AS(validate_profile(s, profile({1, 0})), ValidationError);
  CHECK_THROWS_AS(validate_profile(s, profile({0})), ValidationError);
  CHECK_THROWS_AS(potential(s, empty_graph(3), profile({0, 0})), ValidationError);
}

TEST_CASE("profile space enumeration") {
  const SpectrumScenario s = unit_scenario(4, 3, 31);
  const ProfileSpace space(s);
  std::size_t expect = 1;
  for (std::size_t n = 0; n < 4; ++n) expect *= s.vacant(n).size();
  REQUIRE(space.size() == expect);
  CHECK(profile_space_size(s) == expect);
  for (std::size_t k = 0; k < space.size(); ++k) {
    const ChannelProfile a = space.profile(k);
    CHECK_NOTHROW(validate_profile(s, a));
    CHECK(space.index(a) == k);
    if (k > 0) CHECK(space.profile(k - 1) < a);
  }
  CHECK_THROWS_AS(ProfileSpace(s, expect - 1), CapacityError);
  CHECK(profile({1, 2, 3}).to_string() == "123");
  CHECK(profile({1, 12}).to_string() == "1-12");
}

TEST_CASE("random scenario generator") {
  ScenarioParams p;
  p.n_users = 6;
  p.n_channels = 4;
  p.vacant_min = 2;
  p.vacant_max = 3;
  const SpectrumScenario a = random_scenario(p, 77);
  const SpectrumScenario b = random_scenario(p, 77);
  CHECK(a.noise() == b.noise());
  CHECK(a.gain() == b.gain());
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(a.vacant(n) == b.vacant(n));
    CHECK(a.vacant(n).size() >= 2);
    CHECK(a.vacant(n).size() <= 3);
    CHECK(a.powers()(static_cast<Eigen::Index>(n)) == doctest::Approx(0.1));
    for (std::size_t c = 0; c < 4; ++c) {
      const double w = a.noise(n, static_cast<Channel>(c));
      CHECK(w >= dbm_to_watts(-100.0) * (1 - 1e-12));
      CHECK(w <= dbm_to_watts(-90.0) * (1 + 1e-12));
    }
    const auto& x = a.positions()[n];
    CHECK(x.x() >= 0.0);
    CHECK(x.x() <= 500.0);
  }
  p.vacant_min = 4;
  p.vacant_max = 2;
  CHECK_THROWS_AS(random_scenario(p, 1), ValidationError);
}
