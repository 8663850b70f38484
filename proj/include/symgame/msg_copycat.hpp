#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "symgame/msg_basis.hpp"
#include "symgame/ssg_copycat.hpp"
#include "symgame/types.hpp"

namespace symgame {

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Box-and-subspace payoff set: entries in [-1, 1] and orthogonal to every
// family vector. Holds an orthonormalization of the family (the complement
// basis) and of its null space (the payoff subspace itself).
struct MsgSet {
  int num_states = 0;
  int num_actions = 0;
  double membership_tol = 1e-8;
  std::vector<std::vector<double>> complement;  // orthonormal, spans the family
  std::vector<std::vector<double>> subspace;    // orthonormal null space of the family

  static MsgSet from_family(const OrthogonalFamily& fam, double rank_tol = 1e-10);

  bool contains(const PayoffTensor& u, double box_tol = 1e-9) const;
  // Largest |<q, u>| over the orthonormal complement basis.
  double subspace_residual(const PayoffTensor& u) const;
  // Component of u inside the payoff subspace.
  PayoffTensor project_subspace(const PayoffTensor& u) const;
};

// Largest |<v, u>| over raw family vectors; at most tol for symmetric payoffs.
bool msg_membership(const PayoffTensor& u, const OrthogonalFamily& fam, double tol);
double msg_membership_residual(const PayoffTensor& u, const OrthogonalFamily& fam);

struct ProjectionResult {
  PayoffTensor point;
  int iterations = 0;
  bool converged = false;
  double box_violation = 0.0;       // max(0, |point|_inf - 1)
  double subspace_residual = 0.0;   // max |<q, point>| over complement basis
  std::vector<double> gap_trace;    // per-iteration distance between the two set projections
};

// Euclidean projection onto the box/subspace intersection by Dykstra's
// alternating scheme; both partial projections are closed-form. Stops when
// successive iterates move less than movement_tol.
ProjectionResult project_msg(const PayoffTensor& y, const MsgSet& set, int max_iterations = 10000,
                             double movement_tol = 1e-10);

struct MsgStep {
  MarkovLearnerState state;
  MarkovPolicy policy;
};

// Per-state-skew episode step with the projection swapped for project_msg.
// Throws ConvergenceError when the projection hits its iteration cap.
MsgStep msg_episode_step(MarkovLearnerState state, const LayeredGame& g, const MsgSet& set,
                         const std::optional<Trajectory>& last_trajectory);

}  // namespace symgame
