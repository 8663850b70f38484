#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symgame {

// Episodic two-player game over a layered state space. States carry global
// indices in layer-major order: layer h occupies [layer_start[h], layer_start[h+1]).
// Layer 0 is a single start state. Actions are 0-based internally; every
// external surface (files, CLI) uses 1-based action indices.
struct LayeredGame {
  int horizon = 0;      // number of layers, H >= 1
  int num_actions = 0;  // n >= 1, same for both players
  std::vector<std::string> state_names;  // size |S|, layer-major
  std::vector<int> layer_start;          // size horizon+1, layer_start[0] == 0
  std::vector<int> state_layer;          // per-state layer index

  // transitions[s][a1*n+a2] is a dense distribution over the next layer's
  // states (by position within that layer). Empty for terminal-layer states.
  std::vector<std::vector<std::vector<double>>> transitions;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int layer_size(int h) const { return layer_start[h + 1] - layer_start[h]; }
  int layer_begin(int h) const { return layer_start[h]; }
  bool is_terminal(int s) const { return state_layer[s] == horizon - 1; }
  int pair_index(int a1, int a2) const { return a1 * num_actions + a2; }

  const std::vector<double>& next_dist(int s, int a1, int a2) const {
    return transitions[s][pair_index(a1, a2)];
  }
};

// Shell with states and empty transition rows; callers fill transitions.
LayeredGame make_game_shell(const std::vector<int>& layer_sizes, int num_actions);

// Returns the first violated invariant with its location, or nullopt if the
// game is well formed.
std::optional<std::string> validate_game(const LayeredGame& g);

// Per-state mixed action; rows are probability vectors over the n actions.
struct MarkovPolicy {
  int num_actions = 0;
  std::vector<double> probs;  // num_states x num_actions, row-major

  double prob(int s, int a) const { return probs[s * num_actions + a]; }
  double& prob(int s, int a) { return probs[s * num_actions + a]; }
  std::span<const double> row(int s) const {
    return {probs.data() + static_cast<std::size_t>(s) * num_actions,
            static_cast<std::size_t>(num_actions)};
  }

  static MarkovPolicy uniform(const LayeredGame& g);
  static MarkovPolicy deterministic(const LayeredGame& g, const std::vector<int>& action_per_state);
};

std::optional<std::string> validate_policy(const LayeredGame& g, const MarkovPolicy& p);

// Dense real tensor over (state, action, action) triples. Shared layout for
// payoffs, per-episode losses, and occupancy measures.
struct SaaTensor {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> v;

  double at(int s, int a1, int a2) const {
    return v[(static_cast<std::size_t>(s) * num_actions + a1) * num_actions + a2];
  }
  double& at(int s, int a1, int a2) {
    return v[(static_cast<std::size_t>(s) * num_actions + a1) * num_actions + a2];
  }
  std::size_t size() const { return v.size(); }

  double dot(const SaaTensor& other) const;
  double max_abs() const;

  static SaaTensor zeros(int num_states, int num_actions);
  static SaaTensor zeros(const LayeredGame& g);
};

using PayoffTensor = SaaTensor;
using OccupancyTensor = SaaTensor;

// One episode: exactly H (state, a1, a2) triples.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions1;
  std::vector<int> actions2;

  int length() const { return static_cast<int>(states.size()); }
};

std::optional<std::string> validate_trajectory(const LayeredGame& g, const Trajectory& t);

// Expected cumulative payoff per state.
using ValueTable = std::vector<double>;

}  // namespace symgame
