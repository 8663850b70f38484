#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symgame/rng.hpp"
#include "symgame/types.hpp"

namespace symgame {

enum class Setting { kMatrix, kSsg, kMsg, kHsg };

Setting setting_from_name(const std::string& name);
std::string setting_name(Setting s);

struct AdversaryConfig {
  enum class Kind { kFixedMarkov, kBestResponse, kClairvoyantBestResponse, kOgdInformed, kMirror };
  Kind kind = Kind::kBestResponse;
  std::optional<MarkovPolicy> fixed_policy;  // fixed-markov; uniform when absent
  double step_size = 0.0;                    // ogd-informed; 0 picks a default
};

AdversaryConfig::Kind adversary_kind_from_name(const std::string& name);

// Per-episode opponent. It knows the true payoff; the default kinds react to
// the learner's previous episode only, the clairvoyant kind deliberately
// peeks at the current policy as an out-of-protocol stress mode.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual MarkovPolicy act(long episode, const MarkovPolicy& learner_previous,
                           const MarkovPolicy& learner_current, Rng& rng) = 0;
};

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& cfg, const LayeredGame& g,
                                          const PayoffTensor& u, long total_episodes);

struct EpisodeRecord {
  long episode = 0;             // 1-based
  double sampled_payoff = 0.0;  // realized payoff along the sampled trajectory
  double expected_payoff = 0.0; // exact start-state value of the episode's pair
  double cum_expected = 0.0;    // exact prefix sum
};

struct RunSummary {
  long episodes = 0;
  double final_abs_cum_expected = 0.0;
  double bound_denominator = 0.0;  // setting-appropriate sublinear scale at T
  double bound_ratio = 0.0;
  double wall_seconds = 0.0;  // excluded from the determinism contract
  std::uint64_t seed = 0;
};

struct RunResult {
  Setting setting = Setting::kSsg;
  std::vector<EpisodeRecord> records;
  RunSummary summary;
};

struct ClassCheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  Setting setting = Setting::kSsg;
  long episodes = 0;
  std::uint64_t seed = 0;
  std::optional<double> eta_override;
  bool skip_class_check = false;
  double class_tol = 1e-8;
};

// n*sqrt(T) for matrix play, n*sqrt(T|S|H) for the tensor learners,
// H*n*sqrt(T) for the history-reduced learner.
double bound_denominator(Setting setting, const LayeredGame& g, long episodes);

// Episode loop: the learner emits a policy payoff-blind, the adversary
// responds with full knowledge of the payoff, one trajectory is sampled, and
// the learner sees only that trajectory. Exact expected values are recorded
// by backward induction. Deterministic for a fixed seed.
RunResult run_experiment(const LayeredGame& g, const PayoffTensor& u, const RunOptions& options,
                         const AdversaryConfig& adversary);

// CSV columns: episode,sampled_payoff,expected_payoff,cum_expected,abs_cum_over_bound
// with floats at 17 significant digits; the ratio column uses the bound
// denominator evaluated at the row's episode index.
void write_csv(const RunResult& r, const LayeredGame& g, std::ostream& out);
void write_json(const RunResult& r, std::ostream& out);
RunResult read_json(std::istream& in);

}  // namespace symgame
