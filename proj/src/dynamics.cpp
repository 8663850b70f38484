#include "symgame/dynamics.hpp"

#include <cassert>
#include <stdexcept>

#include "symgame/matrix_game.hpp"

namespace symgame {

namespace {

void check_shapes(const LayeredGame& g, const SaaTensor& u) {
  if (u.num_states != g.num_states() || u.num_actions != g.num_actions)
    throw std::invalid_argument("tensor shape does not match the game");
}

void check_policy_shape(const LayeredGame& g, const MarkovPolicy& p) {
  if (p.num_actions != g.num_actions ||
      p.probs.size() != static_cast<std::size_t>(g.num_states()) * g.num_actions)
    throw std::invalid_argument("policy shape does not match the game");
}

}  // namespace

Trajectory sample_trajectory(const LayeredGame& g, const MarkovPolicy& p1,
                             const MarkovPolicy& p2, Rng& rng) {
  check_policy_shape(g, p1);
  check_policy_shape(g, p2);
  Trajectory t;
  t.states.reserve(g.horizon);
  t.actions1.reserve(g.horizon);
  t.actions2.reserve(g.horizon);
  int s = 0;  // start state
  for (int h = 0; h < g.horizon; ++h) {
    const int a1 = rng.sample(p1.row(s));
    const int a2 = rng.sample(p2.row(s));
    t.states.push_back(s);
    t.actions1.push_back(a1);
    t.actions2.push_back(a2);
    if (h + 1 < g.horizon) {
      const auto& dist = g.next_dist(s, a1, a2);
      s = g.layer_begin(h + 1) + rng.sample(dist);
    }
  }
  return t;
}

ValueTable evaluate_value(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                          const MarkovPolicy& p2) {
  check_shapes(g, u);
  check_policy_shape(g, p1);
  check_policy_shape(g, p2);
  const int n = g.num_actions;
  ValueTable value(g.num_states(), 0.0);
  for (int h = g.horizon - 1; h >= 0; --h) {
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      double acc = 0.0;
      for (int a1 = 0; a1 < n; ++a1) {
        const double q1 = p1.prob(s, a1);
        if (q1 == 0.0) continue;
        for (int a2 = 0; a2 < n; ++a2) {
          const double w = q1 * p2.prob(s, a2);
          if (w == 0.0) continue;
          double q = u.at(s, a1, a2);
          if (h + 1 < g.horizon) {
            const auto& dist = g.next_dist(s, a1, a2);
            const int base = g.layer_begin(h + 1);
            for (int k = 0; k < static_cast<int>(dist.size()); ++k)
              if (dist[k] != 0.0) q += dist[k] * value[base + k];
          }
          acc += w * q;
        }
      }
      value[s] = acc;
    }
  }
  return value;
}

std::vector<double> state_visitation(const LayeredGame& g, const MarkovPolicy& p1,
                                     const MarkovPolicy& p2) {
  check_policy_shape(g, p1);
  check_policy_shape(g, p2);
  const int n = g.num_actions;
  std::vector<double> visit(g.num_states(), 0.0);
  visit[0] = 1.0;
  for (int h = 0; h + 1 < g.horizon; ++h) {
    const int base = g.layer_begin(h + 1);
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      if (visit[s] == 0.0) continue;
      for (int a1 = 0; a1 < n; ++a1) {
        const double q1 = visit[s] * p1.prob(s, a1);
        if (q1 == 0.0) continue;
        for (int a2 = 0; a2 < n; ++a2) {
          const double w = q1 * p2.prob(s, a2);
          if (w == 0.0) continue;
          const auto& dist = g.next_dist(s, a1, a2);
          for (int k = 0; k < static_cast<int>(dist.size()); ++k)
            if (dist[k] != 0.0) visit[base + k] += w * dist[k];
        }
      }
    }
  }
  return visit;
}

OccupancyTensor occupancy(const LayeredGame& g, const MarkovPolicy& p1, const MarkovPolicy& p2) {
  const std::vector<double> visit = state_visitation(g, p1, p2);
  const int n = g.num_actions;
  OccupancyTensor k = SaaTensor::zeros(g);
  for (int s = 0; s < g.num_states(); ++s) {
    if (visit[s] == 0.0) continue;
    for (int a1 = 0; a1 < n; ++a1)
      for (int a2 = 0; a2 < n; ++a2)
        k.at(s, a1, a2) = visit[s] * p1.prob(s, a1) * p2.prob(s, a2);
  }
  return k;
}

MarkovPolicy best_response(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                           Objective objective) {
  check_shapes(g, u);
  check_policy_shape(g, p1);
  const int n = g.num_actions;
  const double sign = (objective == Objective::kMinimize) ? 1.0 : -1.0;
  ValueTable value(g.num_states(), 0.0);
  std::vector<int> choice(g.num_states(), 0);
  for (int h = g.horizon - 1; h >= 0; --h) {
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      double best = 0.0;
      int best_a = 0;
      for (int a2 = 0; a2 < n; ++a2) {
        double q = 0.0;
        for (int a1 = 0; a1 < n; ++a1) {
          const double w = p1.prob(s, a1);
          if (w == 0.0) continue;
          double cell = u.at(s, a1, a2);
          if (h + 1 < g.horizon) {
            const auto& dist = g.next_dist(s, a1, a2);
            const int base = g.layer_begin(h + 1);
            for (int k = 0; k < static_cast<int>(dist.size()); ++k)
              if (dist[k] != 0.0) cell += dist[k] * value[base + k];
          }
          q += w * cell;
        }
        if (a2 == 0 || sign * q < sign * best) {
          best = q;
          best_a = a2;
        }
      }
      value[s] = best;
      choice[s] = best_a;
    }
  }
  return MarkovPolicy::deterministic(g, choice);
}

std::pair<MarkovPolicy, ValueTable> safety_level_policy(const LayeredGame& g,
                                                        const PayoffTensor& u) {
  check_shapes(g, u);
  const int n = g.num_actions;
  MarkovPolicy policy;
  policy.num_actions = n;
  policy.probs.assign(static_cast<std::size_t>(g.num_states()) * n, 0.0);
  ValueTable value(g.num_states(), 0.0);
  std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
  for (int h = g.horizon - 1; h >= 0; --h) {
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
          double cell = u.at(s, a1, a2);
          if (h + 1 < g.horizon) {
            const auto& dist = g.next_dist(s, a1, a2);
            const int base = g.layer_begin(h + 1);
            for (int k = 0; k < static_cast<int>(dist.size()); ++k)
              if (dist[k] != 0.0) cell += dist[k] * value[base + k];
          }
          q[a1 * n + a2] = cell;
        }
      }
      MatrixGameSolution sol = solve_matrix_game(n, q);
      value[s] = sol.value;
      for (int a = 0; a < n; ++a) policy.prob(s, a) = sol.maximin[a];
    }
  }
  return {std::move(policy), std::move(value)};
}

}  // namespace symgame
