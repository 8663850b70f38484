#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symgame/matrix_copycat.hpp"
#include "symgame/types.hpp"

namespace symgame {

struct ExpansionCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The same dynamics over histories: a layer-h state is the sequence of
// states and action pairs leading to it. Only positive-probability histories
// are materialized. History policies of the base game are Markov here.
struct HistoryGame {
  LayeredGame game;
  std::vector<int> origin_state;  // base-game state ending each history
  std::vector<int> parent;        // -1 for the root
  std::vector<int> parent_a1;
  std::vector<int> parent_a2;

  std::string describe(int z) const;  // "(s1,a1,a2,...,sh)" with 1-based actions
};

// Expands the dynamics and lifts the payoff onto histories:
// lifted(z, a, b) = u(last-state(z), a, b).
std::pair<HistoryGame, PayoffTensor> expand_histories(const LayeredGame& g,
                                                      const PayoffTensor& u,
                                                      std::size_t max_histories = 100000);

// Value from a layer-2 history when both players always play action 1.
double continuation_value(const HistoryGame& hg, const PayoffTensor& lifted, int z2);

// Root matrix u'(a,b) = u(s1,a,b) + E[continuation of (s1,a,b,s')]; under
// history-policy symmetry it reproduces every pair's start value.
std::vector<double> equivalent_matrix_game(const LayeredGame& g, const PayoffTensor& u,
                                           std::size_t max_histories = 100000);

struct HsgVerdict {
  bool ok = false;
  double max_value_spread = 0.0;  // over layer-2 histories, best-vs-worst play
  int witness_history = -1;
  double max_skew_defect = 0.0;   // |u'(a,b) + u'(b,a)| worst case
  int witness_a1 = -1, witness_a2 = -1;
  std::string message;
};

// Exact check: cooperative max/min dynamic programs bound the value of every
// (possibly history-dependent) policy pair, so a zero spread at each layer-2
// history plus a skew root matrix certifies the symmetry class.
HsgVerdict verify_hsg(const LayeredGame& g, const PayoffTensor& u, double tol = 1e-9,
                      std::size_t max_histories = 100000);

struct HsgStep {
  MatrixLearnerState state;
  std::vector<double> first_round_strategy;
  int continuation_action = 0;  // played at every later state
};

// Payoff-blind learner: matrix copycat over the bound-H skew box, fed only
// first-round action pairs.
HsgStep hsg_learner_step(MatrixLearnerState state, std::optional<std::pair<int, int>> last_pair);

// Materializes the learner's Markov policy: the given strategy at the start
// state, the continuation action everywhere else.
MarkovPolicy hsg_policy(const LayeredGame& g, const std::vector<double>& first_round_strategy,
                        int continuation_action = 0);

}  // namespace symgame
