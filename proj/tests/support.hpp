#pragma once

// Test-only helpers: brute-force oracles kept independent of the library's
// backward-induction and projection code paths.

#include <cmath>
#include <functional>
#include <vector>

#include "symgame/rng.hpp"
#include "symgame/types.hpp"

namespace symgame::testing {

// Expected start-state value by exhaustive trajectory enumeration:
// sum over all (state, action, action) paths of probability * payoff.
inline double enumerate_value(const LayeredGame& g, const PayoffTensor& u,
                              const MarkovPolicy& p1, const MarkovPolicy& p2,
                              int start_state = 0) {
  double total = 0.0;
  std::function<void(int, double, double)> walk = [&](int s, double prob, double payoff) {
    const int h = g.state_layer[s];
    for (int a1 = 0; a1 < g.num_actions; ++a1) {
      for (int a2 = 0; a2 < g.num_actions; ++a2) {
        const double w = prob * p1.prob(s, a1) * p2.prob(s, a2);
        if (w == 0.0) continue;
        const double acc = payoff + u.at(s, a1, a2);
        if (h == g.horizon - 1) {
          total += w * acc;
          continue;
        }
        const auto& dist = g.next_dist(s, a1, a2);
        for (int k = 0; k < static_cast<int>(dist.size()); ++k)
          if (dist[k] > 0.0) walk(g.layer_begin(h + 1) + k, w * dist[k], acc);
      }
    }
  };
  walk(start_state, 1.0, 0.0);
  return total;
}

// All deterministic action assignments over the full state set.
inline std::vector<std::vector<int>> all_assignments(int num_states, int num_actions) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(num_states, 0);
  while (true) {
    out.push_back(cur);
    int i = 0;
    while (i < num_states && ++cur[i] == num_actions) cur[i++] = 0;
    if (i == num_states) break;
  }
  return out;
}

inline LayeredGame random_game(const std::vector<int>& layer_sizes, int num_actions, Rng& rng) {
  LayeredGame g = make_game_shell(layer_sizes, num_actions);
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.is_terminal(s)) continue;
    const int next = g.layer_size(g.state_layer[s] + 1);
    for (int a1 = 0; a1 < num_actions; ++a1) {
      for (int a2 = 0; a2 < num_actions; ++a2) {
        std::vector<double> dist(next);
        double sum = 0.0;
        for (double& p : dist) {
          p = 0.05 + rng.uniform();
          sum += p;
        }
        for (double& p : dist) p /= sum;
        g.transitions[s][g.pair_index(a1, a2)] = std::move(dist);
      }
    }
  }
  return g;
}

inline PayoffTensor random_payoff(const LayeredGame& g, Rng& rng, double scale = 1.0) {
  PayoffTensor u = SaaTensor::zeros(g);
  for (double& x : u.v) x = rng.uniform(-scale, scale);
  return u;
}

inline MarkovPolicy random_policy(const LayeredGame& g, Rng& rng) {
  MarkovPolicy p = MarkovPolicy::uniform(g);
  for (int s = 0; s < g.num_states(); ++s) {
    double sum = 0.0;
    for (int a = 0; a < g.num_actions; ++a) {
      p.prob(s, a) = 0.02 + rng.uniform();
      sum += p.prob(s, a);
    }
    for (int a = 0; a < g.num_actions; ++a) p.prob(s, a) /= sum;
  }
  return p;
}

}  // namespace symgame::testing
