#include "symgame/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "symgame/dynamics.hpp"
#include "symgame/hsg.hpp"
#include "symgame/linalg.hpp"
#include "symgame/matrix_copycat.hpp"
#include "symgame/msg_copycat.hpp"
#include "symgame/oracles.hpp"
#include "symgame/ssg_copycat.hpp"

namespace symgame {

Setting setting_from_name(const std::string& name) {
  if (name == "matrix") return Setting::kMatrix;
  if (name == "ssg") return Setting::kSsg;
  if (name == "msg") return Setting::kMsg;
  if (name == "hsg") return Setting::kHsg;
  throw std::invalid_argument("unknown setting '" + name + "'");
}

std::string setting_name(Setting s) {
  switch (s) {
    case Setting::kMatrix: return "matrix";
    case Setting::kSsg: return "ssg";
    case Setting::kMsg: return "msg";
    case Setting::kHsg: return "hsg";
  }
  return "?";
}

AdversaryConfig::Kind adversary_kind_from_name(const std::string& name) {
  using Kind = AdversaryConfig::Kind;
  if (name == "fixed-markov") return Kind::kFixedMarkov;
  if (name == "best-response") return Kind::kBestResponse;
  if (name == "clairvoyant-best-response") return Kind::kClairvoyantBestResponse;
  if (name == "ogd-informed") return Kind::kOgdInformed;
  if (name == "mirror") return Kind::kMirror;
  throw std::invalid_argument("unknown adversary '" + name + "'");
}

namespace {

class FixedMarkovAdversary : public Adversary {
 public:
  explicit FixedMarkovAdversary(MarkovPolicy p) : policy_(std::move(p)) {}
  MarkovPolicy act(long, const MarkovPolicy&, const MarkovPolicy&, Rng&) override {
    return policy_;
  }

 private:
  MarkovPolicy policy_;
};

class BestResponseAdversary : public Adversary {
 public:
  BestResponseAdversary(const LayeredGame& g, const PayoffTensor& u, bool clairvoyant)
      : g_(g), u_(u), clairvoyant_(clairvoyant) {}
  MarkovPolicy act(long, const MarkovPolicy& prev, const MarkovPolicy& cur, Rng&) override {
    return best_response(g_, u_, clairvoyant_ ? cur : prev, Objective::kMinimize);
  }

 private:
  const LayeredGame& g_;
  const PayoffTensor& u_;
  bool clairvoyant_;
};

class MirrorAdversary : public Adversary {
 public:
  MarkovPolicy act(long, const MarkovPolicy& prev, const MarkovPolicy&, Rng&) override {
    return prev;
  }
};

// Projected policy gradient on the true payoff against the learner's
// previous policy; reduces to simplex-projected descent on the column
// payoffs in one-shot games.
class OgdInformedAdversary : public Adversary {
 public:
  OgdInformedAdversary(const LayeredGame& g, const PayoffTensor& u, double step)
      : g_(g), u_(u), step_(step), policy_(MarkovPolicy::uniform(g)) {}

  MarkovPolicy act(long, const MarkovPolicy& prev, const MarkovPolicy&, Rng&) override {
    const ValueTable value = evaluate_value(g_, u_, prev, policy_);
    const std::vector<double> visit = state_visitation(g_, prev, policy_);
    const int n = g_.num_actions;
    for (int s = 0; s < g_.num_states(); ++s) {
      if (visit[s] == 0.0) continue;
      std::vector<double> shifted(n);
      for (int b = 0; b < n; ++b) {
        double q = 0.0;
        for (int a = 0; a < n; ++a) {
          const double w = prev.prob(s, a);
          if (w == 0.0) continue;
          double cell = u_.at(s, a, b);
          if (!g_.is_terminal(s)) {
            const auto& dist = g_.next_dist(s, a, b);
            const int base = g_.layer_begin(g_.state_layer[s] + 1);
            for (int k = 0; k < static_cast<int>(dist.size()); ++k)
              if (dist[k] != 0.0) cell += dist[k] * value[base + k];
          }
          q += w * cell;
        }
        shifted[b] = policy_.prob(s, b) - step_ * visit[s] * q;
      }
      const std::vector<double> projected = project_simplex(shifted);
      for (int b = 0; b < n; ++b) policy_.prob(s, b) = projected[b];
    }
    return policy_;
  }

 private:
  const LayeredGame& g_;
  const PayoffTensor& u_;
  double step_;
  MarkovPolicy policy_;
};

void class_check(const LayeredGame& g, const PayoffTensor& u, Setting setting, double tol) {
  switch (setting) {
    case Setting::kMatrix: {
      if (g.horizon != 1 || g.num_states() != 1)
        throw ClassCheckError("matrix setting expects a single-state horizon-1 game");
      SsgSet set{1, g.num_actions};
      if (!set.contains(u, tol))
        throw ClassCheckError("payoff matrix is not skew-symmetric in [-1,1]");
      return;
    }
    case Setting::kSsg: {
      SsgSet set{g.num_states(), g.num_actions};
      if (!set.contains(u, tol))
        throw ClassCheckError("payoff is not per-state skew-symmetric in [-1,1]");
      return;
    }
    case Setting::kMsg: {
      const OrthogonalFamily fam = build_orthogonal_family(g);
      if (u.max_abs() > 1.0 + tol) throw ClassCheckError("payoff leaves the unit box");
      const double residual = msg_membership_residual(u, fam);
      if (residual > tol)
        throw ClassCheckError("payoff is not symmetric across Markov policy swaps (residual " +
                              std::to_string(residual) + ")");
      return;
    }
    case Setting::kHsg: {
      const HsgVerdict verdict = verify_hsg(g, u, std::max(tol, 1e-9));
      if (!verdict.ok) throw ClassCheckError("not a history-symmetric game: " + verdict.message);
      return;
    }
  }
}

double trajectory_payoff(const PayoffTensor& u, const Trajectory& t) {
  double acc = 0.0;
  for (int h = 0; h < t.length(); ++h) acc += u.at(t.states[h], t.actions1[h], t.actions2[h]);
  return acc;
}

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& cfg, const LayeredGame& g,
                                          const PayoffTensor& u, long total_episodes) {
  using Kind = AdversaryConfig::Kind;
  switch (cfg.kind) {
    case Kind::kFixedMarkov:
      return std::make_unique<FixedMarkovAdversary>(
          cfg.fixed_policy ? *cfg.fixed_policy : MarkovPolicy::uniform(g));
    case Kind::kBestResponse:
      return std::make_unique<BestResponseAdversary>(g, u, false);
    case Kind::kClairvoyantBestResponse:
      return std::make_unique<BestResponseAdversary>(g, u, true);
    case Kind::kOgdInformed: {
      double step = cfg.step_size;
      if (step <= 0.0) {
        const double grad_bound = g.horizon * std::sqrt(static_cast<double>(g.num_actions));
        step = std::sqrt(2.0) /
               (grad_bound * std::sqrt(static_cast<double>(std::max<long>(total_episodes, 1))));
      }
      return std::make_unique<OgdInformedAdversary>(g, u, step);
    }
    case Kind::kMirror:
      return std::make_unique<MirrorAdversary>();
  }
  throw std::invalid_argument("unknown adversary kind");
}

double bound_denominator(Setting setting, const LayeredGame& g, long episodes) {
  const double t = static_cast<double>(std::max<long>(episodes, 1));
  const double n = g.num_actions;
  switch (setting) {
    case Setting::kMatrix: return n * std::sqrt(t);
    case Setting::kSsg:
    case Setting::kMsg: return n * std::sqrt(t * g.num_states() * g.horizon);
    case Setting::kHsg: return g.horizon * n * std::sqrt(t);
  }
  return n * std::sqrt(t);
}

RunResult run_experiment(const LayeredGame& g, const PayoffTensor& u, const RunOptions& options,
                         const AdversaryConfig& adversary_cfg) {
  if (auto err = validate_game(g)) throw ClassCheckError("invalid game: " + *err);
  if (!options.skip_class_check) class_check(g, u, options.setting, options.class_tol);
  const auto started = std::chrono::steady_clock::now();

  RunResult result;
  result.setting = options.setting;
  result.summary.seed = options.seed;
  result.summary.episodes = options.episodes;
  result.records.reserve(options.episodes);

  std::unique_ptr<Adversary> adversary = make_adversary(adversary_cfg, g, u, options.episodes);

  // Learner state per setting; the learners only ever see the dynamics and
  // sampled trajectories, never the payoff tensor.
  const int n = g.num_actions;
  MatrixLearnerState matrix_state;
  MarkovLearnerState tensor_state;
  MsgSet msg_set;
  if (options.setting == Setting::kMatrix)
    matrix_state = make_matrix_learner(n, 1.0, options.episodes);
  else if (options.setting == Setting::kHsg)
    matrix_state = make_matrix_learner(n, static_cast<double>(g.horizon), options.episodes);
  else
    tensor_state = make_ssg_learner(g, options.episodes);
  if (options.setting == Setting::kMsg) msg_set = MsgSet::from_family(build_orthogonal_family(g));
  if (options.eta_override) {
    matrix_state.step_size = *options.eta_override;
    tensor_state.step_size = *options.eta_override;
  }

  MarkovPolicy learner_prev = MarkovPolicy::uniform(g);
  std::optional<Trajectory> last_trajectory;
  std::optional<std::pair<int, int>> last_pair;
  double cum_expected = 0.0;

  for (long t = 0; t < options.episodes; ++t) {
    MarkovPolicy learner_policy;
    switch (options.setting) {
      case Setting::kMatrix: {
        MatrixStep step = matrix_copycat_step(std::move(matrix_state), last_pair);
        matrix_state = std::move(step.state);
        learner_policy.num_actions = n;
        learner_policy.probs = std::move(step.strategy);
        break;
      }
      case Setting::kHsg: {
        HsgStep step = hsg_learner_step(std::move(matrix_state), last_pair);
        matrix_state = std::move(step.state);
        learner_policy = hsg_policy(g, step.first_round_strategy, step.continuation_action);
        break;
      }
      case Setting::kSsg: {
        SsgStep step = ssg_episode_step(std::move(tensor_state), g, last_trajectory);
        tensor_state = std::move(step.state);
        learner_policy = std::move(step.policy);
        break;
      }
      case Setting::kMsg: {
        MsgStep step = msg_episode_step(std::move(tensor_state), g, msg_set, last_trajectory);
        tensor_state = std::move(step.state);
        learner_policy = std::move(step.policy);
        break;
      }
    }

    Rng adversary_rng = Rng::for_episode(options.seed ^ 0x5adbeefULL, t);
    const MarkovPolicy opponent = adversary->act(t, learner_prev, learner_policy, adversary_rng);

    Rng episode_rng = Rng::for_episode(options.seed, t);
    const Trajectory trajectory = sample_trajectory(g, learner_policy, opponent, episode_rng);

    EpisodeRecord rec;
    rec.episode = t + 1;
    rec.sampled_payoff = trajectory_payoff(u, trajectory);
    rec.expected_payoff = evaluate_value(g, u, learner_policy, opponent)[0];
    cum_expected += rec.expected_payoff;
    rec.cum_expected = cum_expected;
    result.records.push_back(rec);

    last_trajectory = trajectory;
    last_pair = std::make_pair(trajectory.actions1[0], trajectory.actions2[0]);
    learner_prev = std::move(learner_policy);
  }

  result.summary.final_abs_cum_expected = std::abs(cum_expected);
  result.summary.bound_denominator = bound_denominator(options.setting, g, options.episodes);
  result.summary.bound_ratio =
      result.summary.final_abs_cum_expected / result.summary.bound_denominator;
  result.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_csv(const RunResult& r, const LayeredGame& g, std::ostream& out) {
  out << "episode,sampled_payoff,expected_payoff,cum_expected,abs_cum_over_bound\n";
  char buf[128];
  for (const EpisodeRecord& rec : r.records) {
    const double denom = bound_denominator(r.setting, g, rec.episode);
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g\n", rec.episode,
                  rec.sampled_payoff, rec.expected_payoff, rec.cum_expected,
                  std::abs(rec.cum_expected) / denom);
    out << buf;
  }
}

void write_json(const RunResult& r, std::ostream& out) {
  nlohmann::json j;
  j["setting"] = setting_name(r.setting);
  nlohmann::json records = nlohmann::json::array();
  for (const EpisodeRecord& rec : r.records) {
    records.push_back({{"episode", rec.episode},
                       {"sampled_payoff", rec.sampled_payoff},
                       {"expected_payoff", rec.expected_payoff},
                       {"cum_expected", rec.cum_expected}});
  }
  j["records"] = std::move(records);
  j["summary"] = {{"episodes", r.summary.episodes},
                  {"final_abs_cum_expected", r.summary.final_abs_cum_expected},
                  {"bound_denominator", r.summary.bound_denominator},
                  {"bound_ratio", r.summary.bound_ratio},
                  {"wall_seconds", r.summary.wall_seconds},
                  {"seed", r.summary.seed}};
  out << j.dump(2) << "\n";
}

RunResult read_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  RunResult r;
  r.setting = setting_from_name(j.at("setting").get<std::string>());
  for (const auto& rec : j.at("records")) {
    EpisodeRecord e;
    e.episode = rec.at("episode").get<long>();
    e.sampled_payoff = rec.at("sampled_payoff").get<double>();
    e.expected_payoff = rec.at("expected_payoff").get<double>();
    e.cum_expected = rec.at("cum_expected").get<double>();
    r.records.push_back(e);
  }
  const auto& s = j.at("summary");
  r.summary.episodes = s.at("episodes").get<long>();
  r.summary.final_abs_cum_expected = s.at("final_abs_cum_expected").get<double>();
  r.summary.bound_denominator = s.at("bound_denominator").get<double>();
  r.summary.bound_ratio = s.at("bound_ratio").get<double>();
  r.summary.wall_seconds = s.at("wall_seconds").get<double>();
  r.summary.seed = s.at("seed").get<std::uint64_t>();
  return r;
}

}  // namespace symgame
