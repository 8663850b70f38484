#include "symgame/matrix_copycat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "symgame/matrix_game.hpp"

namespace symgame {

namespace {

double clip(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace

bool SkewBoundedSet::contains(std::span<const double> m, double tol) const {
  const int n = num_actions;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(m[i * n + j] + m[j * n + i]) > tol) return false;
      if (std::abs(m[i * n + j]) > bound + tol) return false;
    }
  }
  return true;
}

std::vector<double> project_skew_box(int n, std::span<const double> m, double bound) {
  if (bound <= 0.0) throw std::invalid_argument("project_skew_box: bound must be positive");
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double x = clip(0.5 * (m[i * n + j] - m[j * n + i]), -bound, bound);
      out[i * n + j] = x;
      out[j * n + i] = -x;
    }
  }
  return out;
}

double skew_box_step_size(int n, double bound, long total_rounds) {
  const double diameter = 2.0 * bound * std::sqrt(n * (n - 1) / 2.0);
  return diameter / std::sqrt(static_cast<double>(std::max<long>(total_rounds, 1)));
}

MatrixLearnerState make_matrix_learner(int n, double bound, long total_rounds) {
  MatrixLearnerState st;
  st.num_actions = n;
  st.bound = bound;
  st.step_size = skew_box_step_size(n, bound, total_rounds);
  st.iterate.assign(static_cast<std::size_t>(n) * n, 0.0);
  return st;
}

MatrixLearnerState make_matrix_learner_doubling(int n, double bound) {
  MatrixLearnerState st = make_matrix_learner(n, bound, 1);
  st.doubling = true;
  st.epoch_length = 1;
  st.epoch_done = 0;
  st.step_size = skew_box_step_size(n, bound, 1);
  return st;
}

MatrixStep matrix_copycat_step(MatrixLearnerState state,
                               std::optional<std::pair<int, int>> last_pair) {
  const int n = state.num_actions;
  if (last_pair) {
    if (state.doubling && state.epoch_done == state.epoch_length) {
      state.epoch_length *= 2;
      state.epoch_done = 0;
      state.step_size = skew_box_step_size(n, state.bound, state.epoch_length);
      std::fill(state.iterate.begin(), state.iterate.end(), 0.0);
    }
    const auto [a1, a2] = *last_pair;
    if (a1 < 0 || a1 >= n || a2 < 0 || a2 >= n)
      throw std::invalid_argument("matrix_copycat_step: action out of range");
    // The loss touches one cell, so only the (a1,a2)/(a2,a1) pair re-projects.
    if (a1 != a2) {
      const double y_fwd = state.iterate[a1 * n + a2] - state.step_size;
      const double y_bwd = state.iterate[a2 * n + a1];
      const double x = clip(0.5 * (y_fwd - y_bwd), -state.bound, state.bound);
      state.iterate[a1 * n + a2] = x;
      state.iterate[a2 * n + a1] = -x;
    }
    state.round += 1;
    state.epoch_done += 1;
  }
  MatrixGameSolution sol = solve_matrix_game(n, state.iterate);
  return {std::move(state), std::move(sol.maximin)};
}

double approachability_distance(int n, std::span<const double> avg_play) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double skew = 0.5 * (avg_play[i * n + j] - avg_play[j * n + i]);
      acc += skew * skew;
    }
  return std::sqrt(acc);
}

}  // namespace symgame
