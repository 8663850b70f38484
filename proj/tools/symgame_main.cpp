// Command-line front end: run experiments, verify symmetry classes, emit the
// orthogonal family, project payoffs, generate instances, and query the
// brute-force oracles.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symgame/dynamics.hpp"
#include "symgame/generators.hpp"
#include "symgame/harness.hpp"
#include "symgame/hsg.hpp"
#include "symgame/io.hpp"
#include "symgame/msg_basis.hpp"
#include "symgame/msg_copycat.hpp"
#include "symgame/oracles.hpp"

namespace {

using namespace symgame;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitNonConvergence = 3;

std::vector<int> parse_layers(const std::string& spec) {
  std::vector<int> sizes;
  std::string cur;
  for (char c : spec + ",") {
    if (c == ',') {
      if (!cur.empty()) sizes.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return sizes;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

int cmd_run(const std::string& game_path, const std::string& setting_name,
            const std::string& adversary_name, long episodes, std::uint64_t seed,
            std::optional<double> eta, const std::string& out_path, const std::string& format,
            bool force, double tol, const std::string& adv_policy_path, double adv_step) {
  auto [game, payoff] = load_game_file(game_path);
  RunOptions options;
  options.setting = setting_from_name(setting_name);
  options.episodes = episodes;
  options.seed = seed;
  options.eta_override = eta;
  options.skip_class_check = force;
  options.class_tol = tol;

  AdversaryConfig adv;
  adv.kind = adversary_kind_from_name(adversary_name);
  adv.step_size = adv_step;
  if (!adv_policy_path.empty()) adv.fixed_policy = load_policy_file(game, adv_policy_path);

  RunResult result = run_experiment(game, payoff, options, adv);
  std::printf("episodes=%ld |cum expected|=%.6g bound=%.6g ratio=%.6g wall=%.3fs\n",
              result.summary.episodes, result.summary.final_abs_cum_expected,
              result.summary.bound_denominator, result.summary.bound_ratio,
              result.summary.wall_seconds);
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    if (format == "json")
      write_json(result, out);
    else
      write_csv(result, game, out);
  }
  return kExitOk;
}

int cmd_check(const std::string& game_path, const std::string& setting_name, double tol) {
  auto [game, payoff] = load_game_file(game_path);
  const Setting setting = setting_from_name(setting_name);
  RunOptions options;
  options.setting = setting;
  options.episodes = 0;
  options.class_tol = tol;
  AdversaryConfig adv;
  adv.kind = AdversaryConfig::Kind::kFixedMarkov;
  try {
    run_experiment(game, payoff, options, adv);
  } catch (const ClassCheckError& e) {
    std::printf("FAIL %s: %s\n", setting_name.c_str(), e.what());
    return kExitValidation;
  }
  std::printf("OK %s\n", setting_name.c_str());
  return kExitOk;
}

int cmd_basis(const std::string& game_path, const std::string& out_path) {
  auto [game, payoff] = load_game_file(game_path);
  const OrthogonalFamily fam = build_orthogonal_family(game);
  nlohmann::json j;
  j["num_vectors"] = fam.vectors.size();
  nlohmann::json vectors = nlohmann::json::array();
  for (std::size_t k = 0; k < fam.vectors.size(); ++k) {
    const auto& prov = fam.provenance[k];
    nlohmann::json entries = nlohmann::json::object();
    const auto& v = fam.vectors[k];
    for (int s = 0; s < v.num_states; ++s)
      for (int a = 0; a < v.num_actions; ++a)
        for (int b = 0; b < v.num_actions; ++b)
          if (v.at(s, a, b) != 0.0)
            entries[game.state_names[s] + "|" + std::to_string(a + 1) + "|" +
                    std::to_string(b + 1)] = v.at(s, a, b);
    vectors.push_back({{"slot", prov.slot},
                       {"state", game.state_names[prov.state]},
                       {"action1", prov.action1 + 1},
                       {"action2", prov.action2 + 1},
                       {"entries", std::move(entries)}});
  }
  j["vectors"] = std::move(vectors);
  std::ofstream out = open_output(out_path);
  out << j.dump(2) << "\n";
  std::printf("wrote %zu vectors to %s\n", fam.vectors.size(), out_path.c_str());
  return kExitOk;
}

int cmd_project(const std::string& game_path, const std::string& payoff_path,
                const std::string& out_path) {
  auto [game, game_payoff] = load_game_file(game_path);
  const PayoffTensor y =
      payoff_path.empty() ? game_payoff : load_payoff_file(game, payoff_path);
  const MsgSet set = MsgSet::from_family(build_orthogonal_family(game));
  const ProjectionResult r = project_msg(y, set);
  std::printf("iterations=%d box_violation=%.3g subspace_residual=%.3g%s\n", r.iterations,
              r.box_violation, r.subspace_residual, r.converged ? "" : " (not converged)");
  if (!out_path.empty()) {
    nlohmann::json j;
    nlohmann::json payoff = nlohmann::json::object();
    for (int s = 0; s < r.point.num_states; ++s)
      for (int a = 0; a < game.num_actions; ++a)
        for (int b = 0; b < game.num_actions; ++b)
          if (r.point.at(s, a, b) != 0.0)
            payoff[game.state_names[s] + "|" + std::to_string(a + 1) + "|" +
                   std::to_string(b + 1)] = r.point.at(s, a, b);
    j["payoff"] = std::move(payoff);
    j["residuals"] = {{"box", r.box_violation},
                      {"subspace", r.subspace_residual},
                      {"iterations", r.iterations}};
    std::ofstream out = open_output(out_path);
    out << j.dump(2) << "\n";
  }
  if (!r.converged) {
    std::fprintf(stderr, "projection did not converge within the iteration cap\n");
    return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_gen(const std::string& klass, const std::string& layers, int actions, std::uint64_t seed,
            const std::string& out_path, const std::string& msg_mode) {
  GameShape shape{parse_layers(layers), actions};
  Rng rng(seed);
  LayeredGame game;
  PayoffTensor payoff;
  if (klass == "ssg") {
    GeneratedInstance inst = gen_ssg(shape, rng);
    game = std::move(inst.game);
    payoff = std::move(inst.payoff);
  } else if (klass == "msg") {
    GeneratedInstance inst = gen_msg(
        shape, rng,
        msg_mode == "projected" ? MsgMode::kProjected : MsgMode::kSymmetricTransitions);
    game = std::move(inst.game);
    payoff = std::move(inst.payoff);
  } else if (klass == "hsg") {
    HsgInstance inst = gen_hsg(shape, rng);
    game = std::move(inst.game);
    payoff = std::move(inst.payoff);
  } else if (klass == "random") {
    GeneratedInstance inst = gen_random(shape, rng);
    game = std::move(inst.game);
    payoff = std::move(inst.payoff);
  } else {
    throw std::invalid_argument("unknown class '" + klass + "'");
  }
  save_game_file(game, payoff, out_path);
  std::printf("wrote %s game (%d states, %d actions, horizon %d) to %s\n", klass.c_str(),
              game.num_states(), game.num_actions, game.horizon, out_path.c_str());
  return kExitOk;
}

int cmd_oracle(const std::string& game_path, const std::string& payoff_path,
               const std::string& check, double tol, int svg_layer) {
  auto [game, game_payoff] = load_game_file(game_path);
  const PayoffTensor u =
      payoff_path.empty() ? game_payoff : load_payoff_file(game, payoff_path);
  bool ok = false;
  std::string witness;
  if (check == "msg") {
    ok = msg_membership_bruteforce(game, u, tol);
    if (!ok) witness = "some deterministic pair has a nonzero symmetric defect";
  } else if (check == "lrsg") {
    ok = check_lrsg(game, u, tol);
    if (!ok) witness = "a terminal state violates the pairwise-sum or symmetry condition";
  } else if (check == "svg") {
    const int layer = (svg_layer > 0) ? svg_layer - 1 : game.horizon - 1;
    ok = check_svg(game, u, layer, tol);
    if (!ok) witness = "values at layer " + std::to_string(layer + 1) + " are not swap-invariant";
  } else if (check == "hsg") {
    const HsgVerdict verdict = verify_hsg(game, u, tol);
    ok = verdict.ok;
    witness = verdict.message;
  } else if (check == "span") {
    const OrthogonalFamily fam = build_orthogonal_family(game);
    ok = span_equal(fam.vectors, deterministic_pair_family(game), tol);
    if (!ok) witness = "constructed family and deterministic-pair family span different spaces";
  } else {
    throw std::invalid_argument("unknown oracle check '" + check + "'");
  }
  std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", check.c_str(), witness.empty() ? "" : ": ",
              witness.c_str());
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"payoff-blind play in symmetric layered games"};
  app.require_subcommand(1);

  std::string game_path, payoff_path, out_path, setting = "ssg", adversary = "best-response";
  std::string format = "csv", klass = "ssg", layers = "1,4,4", check, msg_mode = "symmetric";
  long episodes = 1000;
  std::uint64_t seed = 0;
  double eta = 0.0, tol = 1e-8;
  double adv_step = 0.0;
  std::string adv_policy;
  bool force = false;
  int actions = 2, svg_layer = 0;

  CLI::App* run = app.add_subcommand("run", "run a payoff-blind learning experiment");
  run->add_option("--game", game_path)->required();
  run->add_option("--setting", setting)->check(CLI::IsMember({"matrix", "ssg", "msg", "hsg"}));
  run->add_option("--adversary", adversary)
      ->check(CLI::IsMember({"fixed-markov", "best-response", "clairvoyant-best-response",
                             "ogd-informed", "mirror"}));
  run->add_option("--episodes", episodes);
  run->add_option("--seed", seed);
  run->add_option("--eta", eta);
  run->add_option("--out", out_path);
  run->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--tol", tol);
  run->add_option("--adv-policy", adv_policy, "policy file for the fixed-markov adversary");
  run->add_option("--adv-step", adv_step, "step size for the ogd-informed adversary");
  run->add_flag("--force", force, "skip the symmetry-class gate");

  CLI::App* chk = app.add_subcommand("check", "verify a game against a symmetry class");
  chk->add_option("--game", game_path)->required();
  chk->add_option("--setting", setting)->check(CLI::IsMember({"matrix", "ssg", "msg", "hsg"}));
  chk->add_option("--tol", tol);

  CLI::App* basis = app.add_subcommand("basis", "emit the orthogonal occupancy family");
  basis->add_option("--game", game_path)->required();
  basis->add_option("--out", out_path)->required();

  CLI::App* project = app.add_subcommand("project", "project a payoff onto the symmetric set");
  project->add_option("--game", game_path)->required();
  project->add_option("--payoff", payoff_path);
  project->add_option("--out", out_path);

  CLI::App* gen = app.add_subcommand("gen", "generate a game instance");
  gen->add_option("--class", klass)->check(CLI::IsMember({"ssg", "msg", "hsg", "random"}));
  gen->add_option("--layers", layers, "comma-separated layer sizes, e.g. 1,4,4");
  gen->add_option("--actions", actions);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();
  gen->add_option("--mode", msg_mode)->check(CLI::IsMember({"symmetric", "projected"}));

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force class verdicts");
  oracle->add_option("--game", game_path)->required();
  oracle->add_option("--payoff", payoff_path);
  oracle->add_option("--check", check)
      ->required()
      ->check(CLI::IsMember({"msg", "lrsg", "svg", "hsg", "span"}));
  oracle->add_option("--tol", tol);
  oracle->add_option("--layer", svg_layer, "1-based layer for the svg check (default last)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(game_path, setting, adversary, episodes, seed,
                     eta > 0.0 ? std::optional<double>(eta) : std::nullopt, out_path, format,
                     force, tol, adv_policy, adv_step);
    if (chk->parsed()) return cmd_check(game_path, setting, tol);
    if (basis->parsed()) return cmd_basis(game_path, out_path);
    if (project->parsed()) return cmd_project(game_path, payoff_path, out_path);
    if (gen->parsed()) return cmd_gen(klass, layers, actions, seed, out_path, msg_mode);
    if (oracle->parsed()) return cmd_oracle(game_path, payoff_path, check, tol, svg_layer);
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
