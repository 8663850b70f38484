#include "symgame/msg_copycat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symgame/dynamics.hpp"
#include "symgame/linalg.hpp"

namespace symgame {

MsgSet MsgSet::from_family(const OrthogonalFamily& fam, double rank_tol) {
  MsgSet set;
  set.num_states = fam.num_states;
  set.num_actions = fam.num_actions;
  std::vector<std::vector<double>> columns;
  columns.reserve(fam.vectors.size());
  for (const auto& v : fam.vectors) columns.push_back(v.v);
  set.complement = orthonormalize(columns, rank_tol);
  const int dim = fam.num_states * fam.num_actions * fam.num_actions;
  set.subspace = orthonormal_complement(set.complement, dim, rank_tol);
  return set;
}

bool MsgSet::contains(const PayoffTensor& u, double box_tol) const {
  if (u.num_states != num_states || u.num_actions != num_actions) return false;
  if (u.max_abs() > 1.0 + box_tol) return false;
  return subspace_residual(u) <= membership_tol;
}

double MsgSet::subspace_residual(const PayoffTensor& u) const {
  double worst = 0.0;
  for (const auto& q : complement) worst = std::max(worst, std::abs(dot(q, u.v)));
  return worst;
}

PayoffTensor MsgSet::project_subspace(const PayoffTensor& u) const {
  PayoffTensor out = SaaTensor::zeros(u.num_states, u.num_actions);
  for (const auto& q : subspace) {
    const double c = dot(q, u.v);
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += c * q[i];
  }
  return out;
}

double msg_membership_residual(const PayoffTensor& u, const OrthogonalFamily& fam) {
  double worst = 0.0;
  for (const auto& v : fam.vectors) worst = std::max(worst, std::abs(v.dot(u)));
  return worst;
}

bool msg_membership(const PayoffTensor& u, const OrthogonalFamily& fam, double tol) {
  return msg_membership_residual(u, fam) <= tol;
}

ProjectionResult project_msg(const PayoffTensor& y, const MsgSet& set, int max_iterations,
                             double movement_tol) {
  const std::size_t dim = y.v.size();
  ProjectionResult res;
  res.point = y;

  std::vector<double> x = y.v;          // subspace-side iterate
  std::vector<double> box_point(dim);   // box-side iterate
  std::vector<double> correction(dim, 0.0);  // Dykstra increment for the box
  std::vector<double> prev(dim);

  for (int it = 0; it < max_iterations; ++it) {
    prev = x;
    // Box pass with correction.
    double gap = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double z = x[i] + correction[i];
      box_point[i] = std::clamp(z, -1.0, 1.0);
      correction[i] = z - box_point[i];
    }
    // Subspace pass (affine, no correction needed).
    {
      std::vector<double> proj(dim, 0.0);
      for (const auto& q : set.subspace) {
        const double c = dot(q, box_point);
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < dim; ++i) proj[i] += c * q[i];
      }
      x = std::move(proj);
    }
    for (std::size_t i = 0; i < dim; ++i) gap = std::max(gap, std::abs(x[i] - box_point[i]));
    res.gap_trace.push_back(gap);
    res.iterations = it + 1;
    double movement = 0.0;
    double overshoot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      movement = std::max(movement, std::abs(x[i] - prev[i]));
      overshoot = std::max(overshoot, std::abs(x[i]) - 1.0);
    }
    // The movement threshold decides convergence, but the returned point must
    // also sit inside the box with margin.
    if (it > 0 && movement < movement_tol && overshoot <= 1e-10) {
      res.converged = true;
      break;
    }
  }

  res.point.v = x;
  double viol = 0.0;
  for (double v : x) viol = std::max(viol, std::abs(v) - 1.0);
  res.box_violation = std::max(0.0, viol);
  res.subspace_residual = set.subspace_residual(res.point);
  return res;
}

MsgStep msg_episode_step(MarkovLearnerState state, const LayeredGame& g, const MsgSet& set,
                         const std::optional<Trajectory>& last_trajectory) {
  if (last_trajectory) {
    if (state.doubling && state.epoch_done == state.epoch_length) {
      state.epoch_length *= 2;
      state.epoch_done = 0;
      state.step_size = ssg_step_size(g, state.epoch_length);
      std::fill(state.iterate.v.begin(), state.iterate.v.end(), 0.0);
    }
    const PayoffTensor loss = loss_from_trajectory(g, *last_trajectory);
    PayoffTensor moved = state.iterate;
    for (std::size_t i = 0; i < moved.v.size(); ++i)
      moved.v[i] -= state.step_size * loss.v[i];
    ProjectionResult proj = project_msg(moved, set);
    if (!proj.converged) {
      std::ostringstream msg;
      msg << "projection did not converge after " << proj.iterations
          << " iterations (box violation " << proj.box_violation << ", subspace residual "
          << proj.subspace_residual << ")";
      throw ConvergenceError(msg.str());
    }
    state.iterate = std::move(proj.point);
    state.round += 1;
    state.epoch_done += 1;
  }
  auto [policy, value] = safety_level_policy(g, state.iterate);
  (void)value;
  return {std::move(state), std::move(policy)};
}

}  // namespace symgame
