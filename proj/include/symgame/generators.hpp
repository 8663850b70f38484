#pragma once

#include <vector>

#include "symgame/rng.hpp"
#include "symgame/types.hpp"

namespace symgame {

struct GameShape {
  std::vector<int> layer_sizes;  // first entry must be 1
  int num_actions = 0;
};

struct GeneratedInstance {
  LayeredGame game;
  PayoffTensor payoff;
};

// Unconstrained: dense random transitions, payoffs uniform in [-1, 1].
GeneratedInstance gen_random(const GameShape& shape, Rng& rng);

// Random transitions with a skew-symmetric payoff slice at every state.
GeneratedInstance gen_ssg(const GameShape& shape, Rng& rng);

enum class MsgMode {
  kSymmetricTransitions,  // swap-invariant dynamics plus per-state skew payoffs
  kProjected,             // random payoff projected onto the symmetric subspace
};

GeneratedInstance gen_msg(const GameShape& shape, Rng& rng, MsgMode mode);

struct HsgInstance {
  LayeredGame game;
  PayoffTensor payoff;
  std::vector<double> target_matrix;  // the skew matrix the game reduces to
};

// Action-dependent root transitions, action-independent dynamics afterwards,
// constant-per-state continuation payoffs: the root payoff is arranged so the
// game reduces exactly to target_matrix.
HsgInstance gen_hsg(const GameShape& shape, Rng& rng);

}  // namespace symgame
