#pragma once

#include <utility>

#include "symgame/rng.hpp"
#include "symgame/types.hpp"

namespace symgame {

// Draws one episode under the product of policies and transition kernel.
// Identical seeds give identical trajectories.
Trajectory sample_trajectory(const LayeredGame& g, const MarkovPolicy& p1,
                             const MarkovPolicy& p2, Rng& rng);

// Exact backward-induction values for every state.
ValueTable evaluate_value(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                          const MarkovPolicy& p2);

// Probability of visiting each state in its layer; forward recursion from the
// start state.
std::vector<double> state_visitation(const LayeredGame& g, const MarkovPolicy& p1,
                                     const MarkovPolicy& p2);

// Full (state, a1, a2) visitation tensor: state visitation times the two
// policies' action probabilities. Satisfies value(s1) = occupancy . payoff.
OccupancyTensor occupancy(const LayeredGame& g, const MarkovPolicy& p1, const MarkovPolicy& p2);

enum class Objective { kMinimize, kMaximize };

// With p1 fixed the opponent faces a single-agent problem; returns an exactly
// optimal deterministic Markov response (lowest action index on ties).
MarkovPolicy best_response(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                           Objective objective);

// Maximin Markov policy by backward induction: at each state, solves the
// matrix game on immediate payoff plus expected continuation value.
std::pair<MarkovPolicy, ValueTable> safety_level_policy(const LayeredGame& g,
                                                        const PayoffTensor& u);

}  // namespace symgame
