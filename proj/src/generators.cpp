#include "symgame/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "symgame/msg_copycat.hpp"

namespace symgame {

namespace {

void check_shape(const GameShape& shape) {
  if (shape.layer_sizes.empty() || shape.layer_sizes[0] != 1)
    throw std::invalid_argument("generator shape: first layer must have exactly one state");
  for (int sz : shape.layer_sizes)
    if (sz < 1) throw std::invalid_argument("generator shape: empty layer");
  if (shape.num_actions < 1) throw std::invalid_argument("generator shape: need actions");
}

std::vector<double> random_dist(int size, Rng& rng) {
  std::vector<double> d(size);
  double sum = 0.0;
  for (double& p : d) {
    p = 0.05 + rng.uniform();
    sum += p;
  }
  for (double& p : d) p /= sum;
  return d;
}

LayeredGame random_dynamics(const GameShape& shape, Rng& rng) {
  LayeredGame g = make_game_shell(shape.layer_sizes, shape.num_actions);
  const int n = shape.num_actions;
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.is_terminal(s)) continue;
    const int next = g.layer_size(g.state_layer[s] + 1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g.transitions[s][g.pair_index(a, b)] = random_dist(next, rng);
  }
  return g;
}

PayoffTensor per_state_skew(const LayeredGame& g, Rng& rng) {
  PayoffTensor u = SaaTensor::zeros(g);
  for (int s = 0; s < g.num_states(); ++s)
    for (int a = 0; a < g.num_actions; ++a)
      for (int b = a + 1; b < g.num_actions; ++b) {
        const double x = rng.uniform(-1.0, 1.0);
        u.at(s, a, b) = x;
        u.at(s, b, a) = -x;
      }
  return u;
}

}  // namespace

GeneratedInstance gen_random(const GameShape& shape, Rng& rng) {
  check_shape(shape);
  LayeredGame g = random_dynamics(shape, rng);
  PayoffTensor u = SaaTensor::zeros(g);
  for (double& x : u.v) x = rng.uniform(-1.0, 1.0);
  return {std::move(g), std::move(u)};
}

GeneratedInstance gen_ssg(const GameShape& shape, Rng& rng) {
  check_shape(shape);
  LayeredGame g = random_dynamics(shape, rng);
  PayoffTensor u = per_state_skew(g, rng);
  return {std::move(g), std::move(u)};
}

GeneratedInstance gen_msg(const GameShape& shape, Rng& rng, MsgMode mode) {
  check_shape(shape);
  if (mode == MsgMode::kSymmetricTransitions) {
    LayeredGame g = make_game_shell(shape.layer_sizes, shape.num_actions);
    const int n = shape.num_actions;
    for (int s = 0; s < g.num_states(); ++s) {
      if (g.is_terminal(s)) continue;
      const int next = g.layer_size(g.state_layer[s] + 1);
      for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
          std::vector<double> d = random_dist(next, rng);
          g.transitions[s][g.pair_index(b, a)] = d;
          g.transitions[s][g.pair_index(a, b)] = std::move(d);
        }
      }
    }
    PayoffTensor u = per_state_skew(g, rng);
    return {std::move(g), std::move(u)};
  }

  // Projected mode: draw a payoff, push it onto the symmetric subspace of a
  // generic game, and rescale into the box. Positive scaling preserves
  // membership, so a final exact subspace pass keeps residuals at float noise.
  LayeredGame g = random_dynamics(shape, rng);
  const OrthogonalFamily fam = build_orthogonal_family(g);
  const MsgSet set = MsgSet::from_family(fam);
  for (int attempt = 0; attempt < 16; ++attempt) {
    PayoffTensor y = SaaTensor::zeros(g);
    for (double& x : y.v) x = rng.uniform(-1.5, 1.5);
    ProjectionResult proj = project_msg(y, set);
    PayoffTensor u = set.project_subspace(proj.point);
    const double m = u.max_abs();
    if (m < 1e-6) continue;  // degenerate draw, retry
    const double scale = (m > 1.0) ? 1.0 / m : 1.0;
    for (double& x : u.v) x *= scale;
    return {std::move(g), std::move(u)};
  }
  throw std::runtime_error("gen_msg: projected draws kept degenerating");
}

HsgInstance gen_hsg(const GameShape& shape, Rng& rng) {
  check_shape(shape);
  const int n = shape.num_actions;
  LayeredGame g = make_game_shell(shape.layer_sizes, n);
  // Root transitions depend on the actions; later layers do not.
  {
    const int next = g.layer_size(1);
    if (g.horizon >= 2)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.transitions[0][g.pair_index(a, b)] = random_dist(next, rng);
  }
  for (int s = 1; s < g.num_states(); ++s) {
    if (g.is_terminal(s)) continue;
    std::vector<double> d = random_dist(g.layer_size(g.state_layer[s] + 1), rng);
    for (int a = 0; a < n * n; ++a) g.transitions[s][a] = d;
  }

  // Constant-per-state continuation payoffs; their accumulated value from
  // each layer-2 state is fixed regardless of play.
  std::vector<double> state_payoff(g.num_states(), 0.0);
  for (int s = 1; s < g.num_states(); ++s) state_payoff[s] = rng.uniform(-0.5, 0.5);
  std::vector<double> continuation(g.num_states(), 0.0);
  for (int h = g.horizon - 1; h >= 1; --h) {
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) {
      continuation[s] = state_payoff[s];
      if (h + 1 < g.horizon) {
        const auto& dist = g.transitions[s][0];
        const int base = g.layer_begin(h + 1);
        for (int k = 0; k < static_cast<int>(dist.size()); ++k)
          continuation[s] += dist[k] * continuation[base + k];
      }
    }
  }

  std::vector<double> target(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double x = rng.uniform(-0.5, 0.5);
      target[a * n + b] = x;
      target[b * n + a] = -x;
    }

  PayoffTensor u = SaaTensor::zeros(g);
  for (int s = 1; s < g.num_states(); ++s)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) u.at(s, a, b) = state_payoff[s];
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double expected = 0.0;
      if (g.horizon >= 2) {
        const auto& dist = g.next_dist(0, a, b);
        for (int k = 0; k < static_cast<int>(dist.size()); ++k)
          expected += dist[k] * continuation[g.layer_begin(1) + k];
      }
      u.at(0, a, b) = target[a * n + b] - expected;
    }
  }

  const double m = u.max_abs();
  if (m > 1.0) {
    for (double& x : u.v) x /= m;
    for (double& x : target) x /= m;
  }
  return {std::move(g), std::move(u), std::move(target)};
}

}  // namespace symgame
