#include "symgame/hsg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "symgame/dynamics.hpp"

namespace symgame {

std::string HistoryGame::describe(int z) const {
  std::vector<std::string> parts;
  int cur = z;
  while (cur >= 0) {
    parts.push_back(game.state_names[cur]);
    if (parent[cur] >= 0) {
      parts.push_back(std::to_string(parent_a2[cur] + 1));
      parts.push_back(std::to_string(parent_a1[cur] + 1));
    }
    cur = parent[cur];
  }
  std::ostringstream out;
  out << "(";
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (it != parts.rbegin()) out << ",";
    out << *it;
  }
  out << ")";
  return out.str();
}

std::pair<HistoryGame, PayoffTensor> expand_histories(const LayeredGame& g,
                                                      const PayoffTensor& u,
                                                      std::size_t max_histories) {
  if (auto err = validate_game(g)) throw std::invalid_argument("expand_histories: " + *err);
  if (u.num_states != g.num_states() || u.num_actions != g.num_actions)
    throw std::invalid_argument("expand_histories: payoff shape mismatch");
  const int n = g.num_actions;

  HistoryGame hg;
  std::vector<int> layer_sizes(g.horizon, 0);
  // Pass 1: count and record histories layer by layer.
  struct Node {
    int origin, parent, a1, a2;
  };
  std::vector<std::vector<Node>> nodes(g.horizon);
  nodes[0].push_back({0, -1, -1, -1});
  std::size_t total = 1;
  for (int h = 0; h + 1 < g.horizon; ++h) {
    int index = 0;
    for (const Node& z : nodes[h]) {
      const int s = z.origin;
      for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
          const auto& dist = g.next_dist(s, a1, a2);
          for (int k = 0; k < static_cast<int>(dist.size()); ++k) {
            if (dist[k] <= 0.0) continue;
            nodes[h + 1].push_back({g.layer_begin(h + 1) + k, index, a1, a2});
            if (++total > max_histories)
              throw ExpansionCapExceeded("history expansion exceeds " +
                                         std::to_string(max_histories) + " states");
          }
        }
      }
      ++index;
    }
  }
  for (int h = 0; h < g.horizon; ++h) layer_sizes[h] = static_cast<int>(nodes[h].size());

  hg.game = make_game_shell(layer_sizes, n);
  const int total_states = hg.game.num_states();
  hg.origin_state.resize(total_states);
  hg.parent.resize(total_states);
  hg.parent_a1.resize(total_states);
  hg.parent_a2.resize(total_states);
  PayoffTensor lifted = SaaTensor::zeros(total_states, n);

  for (int h = 0; h < g.horizon; ++h) {
    const int base = hg.game.layer_begin(h);
    for (int i = 0; i < layer_sizes[h]; ++i) {
      const Node& z = nodes[h][i];
      const int id = base + i;
      hg.origin_state[id] = z.origin;
      hg.parent[id] = (h == 0) ? -1 : hg.game.layer_begin(h - 1) + z.parent;
      hg.parent_a1[id] = z.a1;
      hg.parent_a2[id] = z.a2;
      hg.game.state_names[id] = "z" + std::to_string(id + 1);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) lifted.at(id, a, b) = u.at(z.origin, a, b);
    }
  }
  // Transitions: each history moves to its extensions with the base-game
  // probability of the appended state.
  for (int h = 0; h + 1 < g.horizon; ++h) {
    const int base = hg.game.layer_begin(h);
    const int next_base = hg.game.layer_begin(h + 1);
    for (int id = base; id < hg.game.layer_start[h + 1]; ++id)
      for (int a = 0; a < n * n; ++a)
        hg.game.transitions[id][a].assign(layer_sizes[h + 1], 0.0);
    for (int j = 0; j < layer_sizes[h + 1]; ++j) {
      const Node& z = nodes[h + 1][j];
      const int parent_id = base + z.parent;
      const int s = hg.origin_state[parent_id];
      const double p = g.next_dist(s, z.a1, z.a2)[hg.origin_state[next_base + j] -
                                                  g.layer_begin(h + 1)];
      hg.game.transitions[parent_id][hg.game.pair_index(z.a1, z.a2)][j] = p;
    }
  }
  return {std::move(hg), std::move(lifted)};
}

namespace {

// Value table when both players pin a single action everywhere.
ValueTable fixed_action_values(const LayeredGame& g, const PayoffTensor& u, int action) {
  ValueTable value(g.num_states(), 0.0);
  for (int h = g.horizon - 1; h >= 0; --h) {
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      double q = u.at(s, action, action);
      if (h + 1 < g.horizon) {
        const auto& dist = g.next_dist(s, action, action);
        const int base = g.layer_begin(h + 1);
        for (int k = 0; k < static_cast<int>(dist.size()); ++k)
          if (dist[k] != 0.0) q += dist[k] * value[base + k];
      }
      value[s] = q;
    }
  }
  return value;
}

ValueTable cooperative_values(const LayeredGame& g, const PayoffTensor& u, bool maximize) {
  const int n = g.num_actions;
  ValueTable value(g.num_states(), 0.0);
  for (int h = g.horizon - 1; h >= 0; --h) {
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      double best = 0.0;
      bool first = true;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          double q = u.at(s, a, b);
          if (h + 1 < g.horizon) {
            const auto& dist = g.next_dist(s, a, b);
            const int base = g.layer_begin(h + 1);
            for (int k = 0; k < static_cast<int>(dist.size()); ++k)
              if (dist[k] != 0.0) q += dist[k] * value[base + k];
          }
          if (first || (maximize ? q > best : q < best)) {
            best = q;
            first = false;
          }
        }
      }
      value[s] = best;
    }
  }
  return value;
}

}  // namespace

double continuation_value(const HistoryGame& hg, const PayoffTensor& lifted, int z2) {
  if (hg.game.horizon < 2 || hg.game.state_layer[z2] != 1)
    throw std::invalid_argument("continuation_value: expected a layer-2 history");
  return fixed_action_values(hg.game, lifted, 0)[z2];
}

std::vector<double> equivalent_matrix_game(const LayeredGame& g, const PayoffTensor& u,
                                           std::size_t max_histories) {
  const int n = g.num_actions;
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  if (g.horizon == 1) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m[a * n + b] = u.at(0, a, b);
    return m;
  }
  auto [hg, lifted] = expand_histories(g, u, max_histories);
  const ValueTable cont = fixed_action_values(hg.game, lifted, 0);
  const int z2_base = hg.game.layer_begin(1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double val = u.at(0, a, b);
      for (int z = z2_base; z < hg.game.layer_start[2]; ++z) {
        if (hg.parent_a1[z] != a || hg.parent_a2[z] != b) continue;
        const double p = g.next_dist(0, a, b)[hg.origin_state[z] - g.layer_begin(1)];
        val += p * cont[z];
      }
      m[a * n + b] = val;
    }
  }
  return m;
}

HsgVerdict verify_hsg(const LayeredGame& g, const PayoffTensor& u, double tol,
                      std::size_t max_histories) {
  HsgVerdict verdict;
  const int n = g.num_actions;
  if (g.horizon >= 2) {
    auto [hg, lifted] = expand_histories(g, u, max_histories);
    const ValueTable hi = cooperative_values(hg.game, lifted, true);
    const ValueTable lo = cooperative_values(hg.game, lifted, false);
    for (int z = hg.game.layer_begin(1); z < hg.game.layer_start[2]; ++z) {
      const double spread = hi[z] - lo[z];
      if (spread > verdict.max_value_spread) {
        verdict.max_value_spread = spread;
        verdict.witness_history = z;
      }
    }
    if (verdict.max_value_spread > tol) {
      std::ostringstream msg;
      msg << "continuation value depends on play at history "
          << hg.describe(verdict.witness_history) << " (spread " << verdict.max_value_spread
          << ")";
      verdict.message = msg.str();
      return verdict;
    }
  }
  const std::vector<double> m = equivalent_matrix_game(g, u, max_histories);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double defect = std::abs(m[a * n + b] + m[b * n + a]);
      if (defect > verdict.max_skew_defect) {
        verdict.max_skew_defect = defect;
        verdict.witness_a1 = a;
        verdict.witness_a2 = b;
      }
    }
  }
  if (verdict.max_skew_defect > tol) {
    std::ostringstream msg;
    msg << "reduced matrix is not skew at (" << (verdict.witness_a1 + 1) << ","
        << (verdict.witness_a2 + 1) << ") with defect " << verdict.max_skew_defect;
    verdict.message = msg.str();
    return verdict;
  }
  verdict.ok = true;
  verdict.message = "ok";
  return verdict;
}

HsgStep hsg_learner_step(MatrixLearnerState state, std::optional<std::pair<int, int>> last_pair) {
  MatrixStep step = matrix_copycat_step(std::move(state), last_pair);
  return {std::move(step.state), std::move(step.strategy), 0};
}

MarkovPolicy hsg_policy(const LayeredGame& g, const std::vector<double>& first_round_strategy,
                        int continuation_action) {
  MarkovPolicy p;
  p.num_actions = g.num_actions;
  p.probs.assign(static_cast<std::size_t>(g.num_states()) * g.num_actions, 0.0);
  for (int a = 0; a < g.num_actions; ++a) p.prob(0, a) = first_round_strategy[a];
  for (int s = 1; s < g.num_states(); ++s) p.prob(s, continuation_action) = 1.0;
  return p;
}

}  // namespace symgame
