#pragma once

#include <span>
#include <vector>

namespace symgame {

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> maximin;  // row player's mixed strategy
};

// Solves the zero-sum matrix game max_x min_j x' M e_j over the simplex with
// a dense simplex method. The returned strategy guarantees
// min_j x' M e_j >= value - 1e-9.
//
// Ties: when the optimal strategy is not unique, the result is the average of
// the distinct optimal vertices found by maximizing each coordinate over the
// optimal face (a maximal-entropy representative); if that refinement fails
// numerically, the found vertex with lexicographically smallest support is
// returned. Fully deterministic.
MatrixGameSolution solve_matrix_game(int n, std::span<const double> payoff_row_major);

}  // namespace symgame
