#pragma once

#include <optional>

#include "symgame/types.hpp"

namespace symgame {

// Payoff tensors whose every state slice is skew-symmetric with entries in
// [-1, 1].
struct SsgSet {
  int num_states = 0;
  int num_actions = 0;

  bool contains(const PayoffTensor& u, double tol = 1e-12) const;
};

// Indicator tensor of an episode: 1 at each visited (state, a1, a2) triple.
PayoffTensor loss_from_trajectory(const LayeredGame& g, const Trajectory& t);

// Per-state skew-box projection of every slice; exact on the product set.
PayoffTensor project_ssg(const PayoffTensor& y);

// Online-gradient iterate over a tensor payoff set; shared by the per-state
// and subspace-constrained learners.
struct MarkovLearnerState {
  PayoffTensor iterate;
  double step_size = 0.0;
  long round = 0;

  bool doubling = false;
  long epoch_length = 0;
  long epoch_done = 0;
};

// Step size d/(g*sqrt(T)) with d = 2*sqrt(|S| n(n-1)/2) and loss norm sqrt(H).
double ssg_step_size(const LayeredGame& g, long total_rounds);

MarkovLearnerState make_ssg_learner(const LayeredGame& g, long total_rounds);
MarkovLearnerState make_ssg_learner_doubling(const LayeredGame& g);

struct SsgStep {
  MarkovLearnerState state;
  MarkovPolicy policy;  // safety-level policy of the virtual game
};

// One episode: descend on the trajectory indicator, re-project the touched
// pairs, and play the safety-level policy of the virtual payoff.
SsgStep ssg_episode_step(MarkovLearnerState state, const LayeredGame& g,
                         const std::optional<Trajectory>& last_trajectory);

}  // namespace symgame
