#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace symgame {

// Bounded skew-symmetric matrices: M = -M' with entries capped at `bound`
// (1 for true-payoff scale, the horizon for the reduced history setting).
struct SkewBoundedSet {
  int num_actions = 0;
  double bound = 1.0;

  bool contains(std::span<const double> m, double tol = 1e-12) const;
};

// Exact Euclidean projection onto SkewBoundedSet: each unordered action pair
// projects independently to (x, -x) with x = clip((m_ij - m_ji)/2, -b, b).
std::vector<double> project_skew_box(int n, std::span<const double> m, double bound);

// Gradient-step size d/(g*sqrt(T)) for the skew box, with diameter
// d = 2*bound*sqrt(n(n-1)/2) and unit loss norm.
double skew_box_step_size(int n, double bound, long total_rounds);

// Online-gradient iterate over a SkewBoundedSet. A pure value: steps return
// an updated copy.
struct MatrixLearnerState {
  int num_actions = 0;
  double bound = 1.0;
  double step_size = 0.0;
  long round = 0;
  std::vector<double> iterate;  // n x n row-major, always inside the set

  // Doubling-trick mode for unknown total rounds: the iterate restarts at
  // each epoch boundary with the step size retuned to the epoch length.
  bool doubling = false;
  long epoch_length = 0;
  long epoch_done = 0;
};

MatrixLearnerState make_matrix_learner(int n, double bound, long total_rounds);
MatrixLearnerState make_matrix_learner_doubling(int n, double bound);

struct MatrixStep {
  MatrixLearnerState state;
  std::vector<double> strategy;  // maximin mixed strategy of the new iterate
};

// One round: descend on the indicator of the observed action pair, re-project
// the touched pair, and play the maximin strategy of the virtual game.
MatrixStep matrix_copycat_step(MatrixLearnerState state,
                               std::optional<std::pair<int, int>> last_pair);

// Frobenius distance from the average play matrix to the symmetric matrices.
double approachability_distance(int n, std::span<const double> avg_play);

}  // namespace symgame
