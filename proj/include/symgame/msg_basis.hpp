#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "symgame/types.hpp"

namespace symgame {

// Ordered family of occupancy-measure sums spanning the orthogonal complement
// of the swap-symmetric payoff subspace. Every vector is a sum of two
// occupancy tensors: nonnegative, per-layer mass 2.
struct OrthogonalFamily {
  struct Provenance {
    int slot = 0;  // 1: base pair, 2: dotted pair, 3: hatted pair
    int state = 0;
    int action1 = 0;
    int action2 = 0;
  };

  int num_states = 0;
  int num_actions = 0;
  std::vector<SaaTensor> vectors;
  std::vector<Provenance> provenance;
};

// Two pairs of policies that witness a player-asymmetry in the dynamics: the
// hatted pair differs from the dotted pair only by swapping the designated
// actions at the probe state.
struct PolicyQuadruple {
  MarkovPolicy dot1, dot2, hat1, hat2;
};

// Probe policies for a (state, a1, a2) cell: play a1/a2 at the state, uniform
// at every other state up to its layer, action 1 afterwards.
std::pair<MarkovPolicy, MarkovPolicy> base_policies(const LayeredGame& g, int s, int a1, int a2);

// Values of the indicator payoff that pays 1 on every visit to `s`; the value
// at an earlier state is the probability of reaching `s` from it.
ValueTable reach_values(const LayeredGame& g, int s, const MarkovPolicy& p1,
                        const MarkovPolicy& p2);

// Expected next-layer reach value after playing (a1, a2) at s_from.
double q_value(const LayeredGame& g, const ValueTable& reach, int s_from, int a1, int a2);

// As q_value, but the contribution of s_via is replaced by the reach value of
// playing (b1, b2) there.
double qbar_value(const LayeredGame& g, const ValueTable& reach, int s_from, int a1, int a2,
                  int s_via, int b1, int b2);

// Scans earlier layers for an action pair whose swap shifts the probability
// of reaching `s`; returns the witnessing policy quadruple, or nullopt when
// every swap is neutral.
std::optional<PolicyQuadruple> nonsym_policies(const LayeredGame& g, int s, int a1, int a2,
                                               double eps_sym = 1e-9);

// Visitation probability per state under uniform-vs-uniform play; states with
// zero mass are unreachable under any policy pair.
std::vector<double> uniform_visitation(const LayeredGame& g);

// Builds the full family over all (state, a1, a2) cells, skipping unreachable
// states and exact duplicates.
OrthogonalFamily build_orthogonal_family(const LayeredGame& g, double eps_sym = 1e-9);

// The same game without its terminal layer.
LayeredGame truncate_last_layer(const LayeredGame& g);

// Folds the terminal layer's action-1 payoffs into the previous layer;
// result is shaped for truncate_last_layer(g). Requires horizon >= 2.
PayoffTensor contract_payoff(const LayeredGame& g, const PayoffTensor& u);

// Restriction of a policy to the truncated game's states.
MarkovPolicy restrict_policy(const LayeredGame& truncated, const MarkovPolicy& p);

}  // namespace symgame
