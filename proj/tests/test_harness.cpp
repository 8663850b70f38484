#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "symgame/dynamics.hpp"
#include "symgame/generators.hpp"
#include "symgame/harness.hpp"

using namespace symgame;
namespace st = symgame::testing;

namespace {

GeneratedInstance small_ssg(std::uint64_t seed) {
  Rng rng(seed);
  GameShape shape{{1, 2, 2}, 2};
  return gen_ssg(shape, rng);
}

GeneratedInstance skew_matrix_game(std::uint64_t seed) {
  Rng rng(seed);
  GameShape shape{{1}, 3};
  return gen_ssg(shape, rng);
}

}  // namespace

TEST_CASE("run_experiment with zero episodes returns an empty result") {
  GeneratedInstance inst = small_ssg(1);
  RunOptions opt{Setting::kSsg, 0, 42, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kBestResponse, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  CHECK(r.records.empty());
  CHECK(r.summary.final_abs_cum_expected == 0.0);
  CHECK(r.summary.episodes == 0);
}

TEST_CASE("same seed gives identical records and csv bytes") {
  GeneratedInstance inst = small_ssg(2);
  RunOptions opt{Setting::kSsg, 40, 7, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kBestResponse, std::nullopt, 0.0};
  RunResult a = run_experiment(inst.game, inst.payoff, opt, adv);
  RunResult b = run_experiment(inst.game, inst.payoff, opt, adv);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].sampled_payoff == b.records[i].sampled_payoff);
    CHECK(a.records[i].expected_payoff == b.records[i].expected_payoff);
    CHECK(a.records[i].cum_expected == b.records[i].cum_expected);
  }
  CHECK(a.summary.final_abs_cum_expected == b.summary.final_abs_cum_expected);
  CHECK(a.summary.bound_ratio == b.summary.bound_ratio);
  std::ostringstream csv_a, csv_b;
  write_csv(a, inst.game, csv_a);
  write_csv(b, inst.game, csv_b);
  CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("csv has the exact header and prefix-sum-consistent rows") {
  GeneratedInstance inst = small_ssg(3);
  RunOptions opt{Setting::kSsg, 3, 11, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kMirror, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  std::ostringstream out;
  write_csv(r, inst.game, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "episode,sampled_payoff,expected_payoff,cum_expected,abs_cum_over_bound");
  int rows = 0;
  double acc = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(std::stol(cell) == rows);
    std::getline(cells, cell, ',');
    std::getline(cells, cell, ',');
    const double expected = std::stod(cell);
    std::getline(cells, cell, ',');
    const double cum = std::stod(cell);
    acc += expected;
    CHECK(cum == acc);  // exact prefix sum survives the 17-digit round trip
    std::getline(cells, cell, ',');
    const double ratio = std::stod(cell);
    CHECK(ratio ==
          doctest::Approx(std::abs(cum) / bound_denominator(Setting::kSsg, inst.game, rows)));
  }
  CHECK(rows == 3);

  // Header-only csv for an empty run.
  RunOptions empty_opt{Setting::kSsg, 0, 11, std::nullopt, false, 1e-8};
  RunResult empty = run_experiment(inst.game, inst.payoff, empty_opt, adv);
  std::ostringstream empty_out;
  write_csv(empty, inst.game, empty_out);
  CHECK(empty_out.str() == "episode,sampled_payoff,expected_payoff,cum_expected,abs_cum_over_bound\n");
}

TEST_CASE("json round trip reproduces records and summary exactly") {
  GeneratedInstance inst = small_ssg(4);
  RunOptions opt{Setting::kSsg, 12, 13, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kOgdInformed, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  std::stringstream buf;
  write_json(r, buf);
  RunResult back = read_json(buf);
  CHECK(back.setting == r.setting);
  REQUIRE(back.records.size() == r.records.size());
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    CHECK(back.records[i].sampled_payoff == r.records[i].sampled_payoff);
    CHECK(back.records[i].expected_payoff == r.records[i].expected_payoff);
    CHECK(back.records[i].cum_expected == r.records[i].cum_expected);
  }
  CHECK(back.summary.final_abs_cum_expected == r.summary.final_abs_cum_expected);
  CHECK(back.summary.bound_denominator == r.summary.bound_denominator);
  CHECK(back.summary.bound_ratio == r.summary.bound_ratio);
  CHECK(back.summary.seed == r.summary.seed);
}

TEST_CASE("payoff blindness: halving the payoff halves every expected value") {
  GeneratedInstance inst = small_ssg(5);
  PayoffTensor half = inst.payoff;
  for (double& x : half.v) x *= 0.5;
  RunOptions opt{Setting::kSsg, 30, 17, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kFixedMarkov, std::nullopt, 0.0};
  RunResult full = run_experiment(inst.game, inst.payoff, opt, adv);
  RunResult scaled = run_experiment(inst.game, half, opt, adv);
  REQUIRE(full.records.size() == scaled.records.size());
  for (std::size_t i = 0; i < full.records.size(); ++i) {
    CHECK(scaled.records[i].expected_payoff ==
          doctest::Approx(0.5 * full.records[i].expected_payoff).epsilon(1e-12));
    CHECK(scaled.records[i].sampled_payoff ==
          doctest::Approx(0.5 * full.records[i].sampled_payoff).epsilon(1e-12));
  }
}

TEST_CASE("class checks gate the run unless skipped") {
  GeneratedInstance inst = small_ssg(6);
  PayoffTensor not_skew = inst.payoff;
  not_skew.at(1, 0, 1) += 0.2;  // break per-state skewness
  RunOptions opt{Setting::kSsg, 5, 19, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kBestResponse, std::nullopt, 0.0};
  CHECK_THROWS_AS(run_experiment(inst.game, not_skew, opt, adv), ClassCheckError);
  opt.skip_class_check = true;
  RunResult r = run_experiment(inst.game, not_skew, opt, adv);
  CHECK(r.records.size() == 5);
}

TEST_CASE("matrix setting requires a one-shot game") {
  GeneratedInstance inst = small_ssg(7);
  RunOptions opt{Setting::kMatrix, 5, 23, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kBestResponse, std::nullopt, 0.0};
  CHECK_THROWS_AS(run_experiment(inst.game, inst.payoff, opt, adv), ClassCheckError);
}

TEST_CASE("fixed adversary replays its policy every episode") {
  GeneratedInstance inst = small_ssg(8);
  MarkovPolicy fixed = MarkovPolicy::uniform(inst.game);
  fixed.prob(0, 0) = 0.9;
  fixed.prob(0, 1) = 0.1;
  AdversaryConfig cfg{AdversaryConfig::Kind::kFixedMarkov, fixed, 0.0};
  auto adv = make_adversary(cfg, inst.game, inst.payoff, 10);
  Rng rng(1);
  MarkovPolicy u = MarkovPolicy::uniform(inst.game);
  for (int t = 0; t < 4; ++t) {
    MarkovPolicy out = adv->act(t, u, u, rng);
    CHECK(out.prob(0, 0) == 0.9);
  }
}

TEST_CASE("mirror adversary on a skew matrix keeps the cumulative value sublinear") {
  GeneratedInstance inst = skew_matrix_game(9);
  RunOptions opt{Setting::kMatrix, 2000, 29, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kMirror, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  CHECK(r.summary.final_abs_cum_expected <= 3.0 * bound_denominator(Setting::kMatrix, inst.game, 2000));
}

TEST_CASE("clairvoyant stress mode still satisfies the learner bound on matrices") {
  GeneratedInstance inst = skew_matrix_game(10);
  RunOptions opt{Setting::kMatrix, 2000, 31, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kClairvoyantBestResponse, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  CHECK(r.summary.final_abs_cum_expected <= 3.0 * bound_denominator(Setting::kMatrix, inst.game, 2000));
}

TEST_CASE("bound denominators follow the setting") {
  Rng rng(11);
  LayeredGame g = st::random_game({1, 4, 4}, 3, rng);
  const double t = 5000;
  CHECK(bound_denominator(Setting::kMatrix, g, 5000) == doctest::Approx(3.0 * std::sqrt(t)));
  CHECK(bound_denominator(Setting::kSsg, g, 5000) ==
        doctest::Approx(3.0 * std::sqrt(t * 9 * 3)));
  CHECK(bound_denominator(Setting::kMsg, g, 5000) ==
        doctest::Approx(3.0 * std::sqrt(t * 9 * 3)));
  CHECK(bound_denominator(Setting::kHsg, g, 5000) == doctest::Approx(3.0 * 3.0 * std::sqrt(t)));
}

TEST_CASE("hsg runs are gated by the verifier and complete end to end") {
  Rng rng(12);
  GameShape shape{{1, 2, 2}, 2};
  HsgInstance inst = gen_hsg(shape, rng);
  RunOptions opt{Setting::kHsg, 50, 37, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kBestResponse, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  CHECK(r.records.size() == 50);

  GeneratedInstance bad = small_ssg(13);  // generic SSG payoffs fail history symmetry
  CHECK_THROWS_AS(run_experiment(bad.game, bad.payoff, opt, adv), ClassCheckError);
}

TEST_CASE("msg runs pass the family gate end to end") {
  Rng rng(14);
  GameShape shape{{1, 2, 2}, 2};
  GeneratedInstance inst = gen_msg(shape, rng, MsgMode::kProjected);
  RunOptions opt{Setting::kMsg, 30, 41, std::nullopt, false, 1e-8};
  AdversaryConfig adv{AdversaryConfig::Kind::kBestResponse, std::nullopt, 0.0};
  RunResult r = run_experiment(inst.game, inst.payoff, opt, adv);
  CHECK(r.records.size() == 30);
  for (std::size_t i = 1; i < r.records.size(); ++i)
    CHECK(r.records[i].cum_expected ==
          r.records[i - 1].cum_expected + r.records[i].expected_payoff);
}
