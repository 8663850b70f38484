#include "symgame/types.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace symgame {

namespace {
constexpr double kRowSumTol = 1e-12;
}

LayeredGame make_game_shell(const std::vector<int>& layer_sizes, int num_actions) {
  LayeredGame g;
  g.horizon = static_cast<int>(layer_sizes.size());
  g.num_actions = num_actions;
  g.layer_start.assign(g.horizon + 1, 0);
  for (int h = 0; h < g.horizon; ++h) g.layer_start[h + 1] = g.layer_start[h] + layer_sizes[h];
  const int total = g.layer_start[g.horizon];
  g.state_names.resize(total);
  g.state_layer.resize(total);
  for (int h = 0; h < g.horizon; ++h)
    for (int s = g.layer_start[h]; s < g.layer_start[h + 1]; ++s) g.state_layer[s] = h;
  for (int s = 0; s < total; ++s) g.state_names[s] = "s" + std::to_string(s + 1);
  g.transitions.resize(total);
  for (int s = 0; s < total; ++s) {
    if (g.state_layer[s] < g.horizon - 1)
      g.transitions[s].assign(static_cast<std::size_t>(num_actions) * num_actions, {});
  }
  return g;
}

std::optional<std::string> validate_game(const LayeredGame& g) {
  if (g.horizon < 1) return "horizon must be >= 1";
  if (g.num_actions < 1) return "num_actions must be >= 1";
  if (static_cast<int>(g.layer_start.size()) != g.horizon + 1) return "layer_start size mismatch";
  if (g.layer_start[0] != 0) return "layer indexing must start at 0";
  for (int h = 0; h < g.horizon; ++h) {
    if (g.layer_start[h + 1] <= g.layer_start[h])
      return "layer " + std::to_string(h + 1) + " is empty";
  }
  if (g.layer_size(0) != 1) return "layer 1 must be singleton";
  const int total = g.layer_start[g.horizon];
  if (static_cast<int>(g.state_names.size()) != total) return "state_names size mismatch";
  if (static_cast<int>(g.state_layer.size()) != total) return "state_layer size mismatch";
  for (int s = 0; s < total; ++s) {
    const int h = g.state_layer[s];
    if (h < 0 || h >= g.horizon || s < g.layer_start[h] || s >= g.layer_start[h + 1])
      return "state " + g.state_names[s] + " not inside its layer range";
  }
  if (static_cast<int>(g.transitions.size()) != total) return "transitions size mismatch";
  const int n = g.num_actions;
  for (int s = 0; s < total; ++s) {
    const int h = g.state_layer[s];
    if (h == g.horizon - 1) {
      if (!g.transitions[s].empty())
        return "terminal state " + g.state_names[s] + " must have no transition rows";
      continue;
    }
    if (static_cast<int>(g.transitions[s].size()) != n * n)
      return "state " + g.state_names[s] + " is missing transition rows";
    const int next_size = g.layer_size(h + 1);
    for (int a1 = 0; a1 < n; ++a1) {
      for (int a2 = 0; a2 < n; ++a2) {
        const auto& row = g.transitions[s][g.pair_index(a1, a2)];
        std::ostringstream loc;
        loc << "(" << g.state_names[s] << "," << (a1 + 1) << "," << (a2 + 1) << ")";
        if (static_cast<int>(row.size()) != next_size)
          return "transition row " + loc.str() + " has wrong length";
        double sum = 0.0;
        for (double p : row) {
          if (!(p >= 0.0)) return "transition row " + loc.str() + " has a negative entry";
          sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
          return "transition row " + loc.str() + " sums to " + std::to_string(sum);
      }
    }
  }
  return std::nullopt;
}

MarkovPolicy MarkovPolicy::uniform(const LayeredGame& g) {
  MarkovPolicy p;
  p.num_actions = g.num_actions;
  p.probs.assign(static_cast<std::size_t>(g.num_states()) * g.num_actions,
                 1.0 / g.num_actions);
  return p;
}

MarkovPolicy MarkovPolicy::deterministic(const LayeredGame& g,
                                         const std::vector<int>& action_per_state) {
  MarkovPolicy p;
  p.num_actions = g.num_actions;
  p.probs.assign(static_cast<std::size_t>(g.num_states()) * g.num_actions, 0.0);
  for (int s = 0; s < g.num_states(); ++s) p.prob(s, action_per_state[s]) = 1.0;
  return p;
}

std::optional<std::string> validate_policy(const LayeredGame& g, const MarkovPolicy& p) {
  if (p.num_actions != g.num_actions) return "policy action count mismatch";
  if (p.probs.size() != static_cast<std::size_t>(g.num_states()) * g.num_actions)
    return "policy state count mismatch";
  for (int s = 0; s < g.num_states(); ++s) {
    double sum = 0.0;
    for (int a = 0; a < g.num_actions; ++a) {
      if (!(p.prob(s, a) >= 0.0))
        return "policy at " + g.state_names[s] + " has a negative probability";
      sum += p.prob(s, a);
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      return "policy at " + g.state_names[s] + " sums to " + std::to_string(sum);
  }
  return std::nullopt;
}

double SaaTensor::dot(const SaaTensor& other) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * other.v[i];
  return acc;
}

double SaaTensor::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

SaaTensor SaaTensor::zeros(int num_states, int num_actions) {
  SaaTensor t;
  t.num_states = num_states;
  t.num_actions = num_actions;
  t.v.assign(static_cast<std::size_t>(num_states) * num_actions * num_actions, 0.0);
  return t;
}

SaaTensor SaaTensor::zeros(const LayeredGame& g) { return zeros(g.num_states(), g.num_actions); }

std::optional<std::string> validate_trajectory(const LayeredGame& g, const Trajectory& t) {
  if (t.length() != g.horizon) return "trajectory length must equal the horizon";
  if (t.actions1.size() != t.states.size() || t.actions2.size() != t.states.size())
    return "trajectory field lengths differ";
  for (int h = 0; h < g.horizon; ++h) {
    const int s = t.states[h];
    if (s < 0 || s >= g.num_states() || g.state_layer[s] != h)
      return "trajectory state at step " + std::to_string(h + 1) + " is not in layer " +
             std::to_string(h + 1);
    if (t.actions1[h] < 0 || t.actions1[h] >= g.num_actions || t.actions2[h] < 0 ||
        t.actions2[h] >= g.num_actions)
      return "trajectory action out of range at step " + std::to_string(h + 1);
    if (h + 1 < g.horizon) {
      const auto& row = g.next_dist(s, t.actions1[h], t.actions2[h]);
      const int next_pos = t.states[h + 1] - g.layer_begin(h + 1);
      if (next_pos < 0 || next_pos >= static_cast<int>(row.size()) || row[next_pos] <= 0.0)
        return "trajectory transition at step " + std::to_string(h + 1) +
               " has zero probability";
    }
  }
  return std::nullopt;
}

}  // namespace symgame
