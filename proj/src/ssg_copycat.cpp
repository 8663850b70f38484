#include "symgame/ssg_copycat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "symgame/dynamics.hpp"
#include "symgame/matrix_copycat.hpp"

namespace symgame {

bool SsgSet::contains(const PayoffTensor& u, double tol) const {
  if (u.num_states != num_states || u.num_actions != num_actions) return false;
  for (int s = 0; s < num_states; ++s)
    for (int a = 0; a < num_actions; ++a)
      for (int b = 0; b < num_actions; ++b) {
        if (std::abs(u.at(s, a, b) + u.at(s, b, a)) > tol) return false;
        if (std::abs(u.at(s, a, b)) > 1.0 + tol) return false;
      }
  return true;
}

PayoffTensor loss_from_trajectory(const LayeredGame& g, const Trajectory& t) {
  if (auto err = validate_trajectory(g, t))
    throw std::invalid_argument("loss_from_trajectory: " + *err);
  PayoffTensor l = SaaTensor::zeros(g);
  for (int h = 0; h < t.length(); ++h) l.at(t.states[h], t.actions1[h], t.actions2[h]) = 1.0;
  return l;
}

PayoffTensor project_ssg(const PayoffTensor& y) {
  const int n = y.num_actions;
  PayoffTensor out = SaaTensor::zeros(y.num_states, n);
  for (int s = 0; s < y.num_states; ++s) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double x =
            std::clamp(0.5 * (y.at(s, i, j) - y.at(s, j, i)), -1.0, 1.0);
        out.at(s, i, j) = x;
        out.at(s, j, i) = -x;
      }
    }
  }
  return out;
}

double ssg_step_size(const LayeredGame& g, long total_rounds) {
  const int n = g.num_actions;
  const double diameter = 2.0 * std::sqrt(g.num_states() * n * (n - 1) / 2.0);
  const double loss_norm = std::sqrt(static_cast<double>(g.horizon));
  return diameter / (loss_norm * std::sqrt(static_cast<double>(std::max<long>(total_rounds, 1))));
}

MarkovLearnerState make_ssg_learner(const LayeredGame& g, long total_rounds) {
  MarkovLearnerState st;
  st.iterate = SaaTensor::zeros(g);
  st.step_size = ssg_step_size(g, total_rounds);
  return st;
}

MarkovLearnerState make_ssg_learner_doubling(const LayeredGame& g) {
  MarkovLearnerState st = make_ssg_learner(g, 1);
  st.doubling = true;
  st.epoch_length = 1;
  return st;
}

SsgStep ssg_episode_step(MarkovLearnerState state, const LayeredGame& g,
                         const std::optional<Trajectory>& last_trajectory) {
  if (last_trajectory) {
    if (state.doubling && state.epoch_done == state.epoch_length) {
      state.epoch_length *= 2;
      state.epoch_done = 0;
      state.step_size = ssg_step_size(g, state.epoch_length);
      std::fill(state.iterate.v.begin(), state.iterate.v.end(), 0.0);
    }
    const Trajectory& t = *last_trajectory;
    if (auto err = validate_trajectory(g, t))
      throw std::invalid_argument("ssg_episode_step: " + *err);
    // Sparse update: each visited cell moves by -eta, then its unordered
    // pair re-projects; untouched cells are already fixed points.
    for (int h = 0; h < t.length(); ++h) {
      const int s = t.states[h];
      const int a = t.actions1[h];
      const int b = t.actions2[h];
      if (a == b) continue;
      const double y_fwd = state.iterate.at(s, a, b) - state.step_size;
      const double y_bwd = state.iterate.at(s, b, a);
      const double x = std::clamp(0.5 * (y_fwd - y_bwd), -1.0, 1.0);
      state.iterate.at(s, a, b) = x;
      state.iterate.at(s, b, a) = -x;
    }
    state.round += 1;
    state.epoch_done += 1;
  }
  auto [policy, value] = safety_level_policy(g, state.iterate);
  (void)value;
  return {std::move(state), std::move(policy)};
}

}  // namespace symgame
