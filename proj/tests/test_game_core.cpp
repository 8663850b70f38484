#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "support.hpp"
#include "symgame/dynamics.hpp"
#include "symgame/io.hpp"
#include "symgame/matrix_game.hpp"
#include "symgame/types.hpp"

using namespace symgame;
namespace st = symgame::testing;

namespace {

// Deterministic two-layer chain: every pair leads to the single layer-2 state.
LayeredGame two_layer_chain(int n) {
  LayeredGame g = make_game_shell({1, 1}, n);
  for (int a1 = 0; a1 < n; ++a1)
    for (int a2 = 0; a2 < n; ++a2) g.transitions[0][g.pair_index(a1, a2)] = {1.0};
  return g;
}

}  // namespace

TEST_CASE("validate_game accepts a single-state horizon-1 game") {
  LayeredGame g = make_game_shell({1}, 2);
  CHECK(!validate_game(g).has_value());
}

TEST_CASE("validate_game reports a bad transition row with its location") {
  LayeredGame g = two_layer_chain(2);
  g.transitions[0][g.pair_index(1, 0)] = {0.9};
  auto err = validate_game(g);
  REQUIRE(err.has_value());
  CHECK(err->find("(s1,2,1)") != std::string::npos);
  CHECK(err->find("sums to") != std::string::npos);
}

TEST_CASE("validate_game rejects a non-singleton first layer") {
  LayeredGame g = make_game_shell({2, 1}, 2);
  auto err = validate_game(g);
  REQUIRE(err.has_value());
  CHECK(err->find("layer 1 must be singleton") != std::string::npos);
}

TEST_CASE("validate_game rejects terminal states with transition rows") {
  LayeredGame g = make_game_shell({1}, 2);
  g.transitions[0].assign(4, {1.0});
  CHECK(validate_game(g).has_value());
}

TEST_CASE("sample_trajectory is deterministic and follows point masses") {
  LayeredGame g = two_layer_chain(2);
  MarkovPolicy p1 = MarkovPolicy::deterministic(g, {0, 1});
  MarkovPolicy p2 = MarkovPolicy::deterministic(g, {1, 0});
  Rng rng_a(7), rng_b(7);
  Trajectory ta = sample_trajectory(g, p1, p2, rng_a);
  Trajectory tb = sample_trajectory(g, p1, p2, rng_b);
  CHECK(ta.states == std::vector<int>{0, 1});
  CHECK(ta.actions1 == std::vector<int>{0, 1});
  CHECK(ta.actions2 == std::vector<int>{1, 0});
  CHECK(ta.states == tb.states);
  CHECK(ta.actions1 == tb.actions1);
  CHECK(ta.actions2 == tb.actions2);
  CHECK(!validate_trajectory(g, ta).has_value());
}

TEST_CASE("sample_trajectory empirical pair frequencies match the product law") {
  LayeredGame g = make_game_shell({1}, 2);
  MarkovPolicy p = MarkovPolicy::uniform(g);
  const int draws = 100000;
  std::map<std::pair<int, int>, int> counts;
  for (int i = 0; i < draws; ++i) {
    Rng rng = Rng::for_episode(123, i);
    Trajectory t = sample_trajectory(g, p, p, rng);
    counts[{t.actions1[0], t.actions2[0]}]++;
  }
  const double sigma = std::sqrt(0.25 * 0.75 / draws);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(std::abs(counts[{a, b}] / double(draws) - 0.25) <= 4.0 * sigma);
}

TEST_CASE("evaluate_value matches the bilinear base case and zero payoff") {
  LayeredGame g = make_game_shell({1}, 3);
  PayoffTensor u = SaaTensor::zeros(g);
  Rng rng(3);
  for (double& x : u.v) x = rng.uniform(-1.0, 1.0);
  MarkovPolicy p1 = st::random_policy(g, rng);
  MarkovPolicy p2 = st::random_policy(g, rng);
  double direct = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) direct += p1.prob(0, a) * p2.prob(0, b) * u.at(0, a, b);
  ValueTable v = evaluate_value(g, u, p1, p2);
  CHECK(v[0] == doctest::Approx(direct).epsilon(1e-12));

  PayoffTensor zero = SaaTensor::zeros(g);
  CHECK(evaluate_value(g, zero, p1, p2)[0] == 0.0);
}

TEST_CASE("evaluate_value equals exhaustive trajectory enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    LayeredGame g = st::random_game({1, 2, 2}, 2, rng);
    PayoffTensor u = st::random_payoff(g, rng);
    MarkovPolicy p1 = st::random_policy(g, rng);
    MarkovPolicy p2 = st::random_policy(g, rng);
    ValueTable v = evaluate_value(g, u, p1, p2);
    CHECK(std::abs(v[0] - st::enumerate_value(g, u, p1, p2)) <= 1e-12);
  }
}

TEST_CASE("occupancy: uniform H=1 gives 0.25 cells, chains give point masses") {
  LayeredGame g1 = make_game_shell({1}, 2);
  MarkovPolicy u1 = MarkovPolicy::uniform(g1);
  OccupancyTensor k1 = occupancy(g1, u1, u1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(k1.at(0, a, b) == doctest::Approx(0.25));

  LayeredGame g2 = two_layer_chain(2);
  MarkovPolicy d = MarkovPolicy::deterministic(g2, {0, 0});
  OccupancyTensor k2 = occupancy(g2, d, d);
  CHECK(k2.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(k2.at(1, 0, 0) == doctest::Approx(1.0));
  CHECK(k2.at(0, 1, 1) == 0.0);
}

TEST_CASE("occupancy inner product with payoff equals the start-state value") {
  Rng rng(17);
  LayeredGame g = st::random_game({1, 3, 2}, 2, rng);
  MarkovPolicy p1 = st::random_policy(g, rng);
  MarkovPolicy p2 = st::random_policy(g, rng);
  OccupancyTensor k = occupancy(g, p1, p2);
  for (int trial = 0; trial < 100; ++trial) {
    PayoffTensor u = st::random_payoff(g, rng);
    ValueTable v = evaluate_value(g, u, p1, p2);
    CHECK(std::abs(k.dot(u) - v[0]) <= 1e-9);
  }
}

TEST_CASE("occupancy per-layer mass is 1") {
  Rng rng(19);
  LayeredGame g = st::random_game({1, 4, 3}, 3, rng);
  MarkovPolicy p1 = st::random_policy(g, rng);
  MarkovPolicy p2 = st::random_policy(g, rng);
  OccupancyTensor k = occupancy(g, p1, p2);
  for (int h = 0; h < g.horizon; ++h) {
    double mass = 0.0;
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) mass += k.at(s, a, b);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("solve_matrix_game handles rock-paper-scissors, 1x1, and 2x2 cases") {
  const std::vector<double> rps = {0, -1, 1, 1, 0, -1, -1, 1, 0};
  MatrixGameSolution s = solve_matrix_game(3, rps);
  CHECK(std::abs(s.value) <= 1e-9);
  for (int i = 0; i < 3; ++i) CHECK(s.maximin[i] == doctest::Approx(1.0 / 3).epsilon(1e-9));

  MatrixGameSolution one = solve_matrix_game(1, std::vector<double>{1.0});
  CHECK(one.value == doctest::Approx(1.0));
  CHECK(one.maximin[0] == doctest::Approx(1.0));

  // Row 2 guarantees min(1, 0) = 0; any weight on row 1 does worse.
  const std::vector<double> m = {0, -1, 1, 0};
  MatrixGameSolution two = solve_matrix_game(2, m);
  CHECK(std::abs(two.value) <= 1e-9);
  CHECK(two.maximin[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(two.maximin[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solve_matrix_game returns uniform for the zero game") {
  MatrixGameSolution s = solve_matrix_game(3, std::vector<double>(9, 0.0));
  CHECK(std::abs(s.value) <= 1e-12);
  for (int i = 0; i < 3; ++i) CHECK(s.maximin[i] == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("solve_matrix_game guarantee and duality on random matrices") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.uniform_int(5);
    std::vector<double> m(n * n);
    for (double& x : m) x = rng.uniform(-1.0, 1.0);
    MatrixGameSolution row = solve_matrix_game(n, m);
    double worst = 1e300;
    for (int j = 0; j < n; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) col += row.maximin[i] * m[i * n + j];
      worst = std::min(worst, col);
    }
    CHECK(worst >= row.value - 1e-9);
    // Column player's game on -M' has the negated value.
    std::vector<double> mt(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mt[j * n + i] = -m[i * n + j];
    MatrixGameSolution col = solve_matrix_game(n, mt);
    CHECK(std::abs(col.value + row.value) <= 1e-8);
  }
}

TEST_CASE("solve_matrix_game value 0 on skew-symmetric matrices") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.uniform_int(6);
    std::vector<double> m(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double x = rng.uniform(-1.0, 1.0);
        m[i * n + j] = x;
        m[j * n + i] = -x;
      }
    MatrixGameSolution s = solve_matrix_game(n, m);
    CHECK(std::abs(s.value) <= 1e-9);
  }
}

TEST_CASE("safety_level_policy: skew payoffs give zero values everywhere") {
  Rng rng(31);
  LayeredGame g = st::random_game({1, 3, 3}, 2, rng);
  PayoffTensor u = SaaTensor::zeros(g);
  for (int s = 0; s < g.num_states(); ++s) {
    const double x = rng.uniform(-1.0, 1.0);
    u.at(s, 0, 1) = x;
    u.at(s, 1, 0) = -x;
  }
  auto [policy, value] = safety_level_policy(g, u);
  for (int s = 0; s < g.num_states(); ++s) CHECK(std::abs(value[s]) <= 1e-9);
}

TEST_CASE("safety_level_policy guarantees the value against every deterministic opponent") {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    LayeredGame g = st::random_game({1, 2}, 2, rng);
    PayoffTensor u = st::random_payoff(g, rng);
    auto [policy, value] = safety_level_policy(g, u);
    for (const auto& assign : st::all_assignments(g.num_states(), g.num_actions)) {
      MarkovPolicy opp = MarkovPolicy::deterministic(g, assign);
      ValueTable v = evaluate_value(g, u, policy, opp);
      CHECK(v[0] >= value[0] - 1e-8);
    }
  }
}

TEST_CASE("safety_level_policy on zero payoff returns zero values and uniform tie-break") {
  LayeredGame g = two_layer_chain(2);
  PayoffTensor u = SaaTensor::zeros(g);
  auto [policy, value] = safety_level_policy(g, u);
  CHECK(value[0] == doctest::Approx(0.0));
  CHECK(value[1] == doctest::Approx(0.0));
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a) CHECK(policy.prob(s, a) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("best_response minimizes exactly over enumerated deterministic responses") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    LayeredGame g = st::random_game({1, 2}, 2, rng);
    PayoffTensor u = st::random_payoff(g, rng);
    MarkovPolicy p1 = st::random_policy(g, rng);
    MarkovPolicy br = best_response(g, u, p1, Objective::kMinimize);
    const double achieved = evaluate_value(g, u, p1, br)[0];
    double best = 1e300;
    for (const auto& assign : st::all_assignments(g.num_states(), g.num_actions))
      best = std::min(best,
                      evaluate_value(g, u, p1, MarkovPolicy::deterministic(g, assign))[0]);
    CHECK(std::abs(achieved - best) <= 1e-12);
  }
}

TEST_CASE("best_response H=1 picks the minimizing column") {
  LayeredGame g = make_game_shell({1}, 3);
  PayoffTensor u = SaaTensor::zeros(g);
  u.at(0, 0, 0) = 1.0;
  u.at(0, 0, 1) = -2.0;
  u.at(0, 0, 2) = 3.0;
  MarkovPolicy p1 = MarkovPolicy::deterministic(g, {0});
  MarkovPolicy br = best_response(g, u, p1, Objective::kMinimize);
  CHECK(br.prob(0, 1) == 1.0);
}

TEST_CASE("monte-carlo trajectory frequencies stay within 4 sigma of occupancy") {
  Rng rng(43);
  LayeredGame g = st::random_game({1, 2}, 2, rng);
  MarkovPolicy p1 = st::random_policy(g, rng);
  MarkovPolicy p2 = st::random_policy(g, rng);
  OccupancyTensor k = occupancy(g, p1, p2);
  SaaTensor counts = SaaTensor::zeros(g);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    Rng ep = Rng::for_episode(777, i);
    Trajectory t = sample_trajectory(g, p1, p2, ep);
    for (int h = 0; h < g.horizon; ++h) counts.at(t.states[h], t.actions1[h], t.actions2[h]) += 1.0;
  }
  int violations = 0;
  for (std::size_t i = 0; i < k.v.size(); ++i) {
    const double p = k.v[i];
    const double bound = 4.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / draws);
    if (std::abs(counts.v[i] / draws - p) > bound) ++violations;
  }
  CHECK(violations <= 1);
}

TEST_CASE("game file round-trip preserves dynamics and payoff") {
  Rng rng(47);
  LayeredGame g = st::random_game({1, 3, 2}, 2, rng);
  PayoffTensor u = st::random_payoff(g, rng);
  const std::string path = (std::filesystem::temp_directory_path() / "symgame_io_test.json").string();
  save_game_file(g, u, path);
  auto [g2, u2] = load_game_file(path);
  REQUIRE(g2.num_states() == g.num_states());
  CHECK(g2.horizon == g.horizon);
  CHECK(g2.num_actions == g.num_actions);
  MarkovPolicy p1 = st::random_policy(g, rng);
  MarkovPolicy p2 = st::random_policy(g, rng);
  CHECK(evaluate_value(g2, u2, p1, p2)[0] ==
        doctest::Approx(evaluate_value(g, u, p1, p2)[0]).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("loader rejects rows that do not sum to one") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "symgame_io_bad.json").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs(R"({"horizon":2,"num_actions":1,"layers":[["a"],["b"]],)"
               R"("transitions":{"a|1|1":[["b",0.9]]},"payoff":{}})",
               f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_game_file(path), ValidationError);
  std::remove(path.c_str());
}
