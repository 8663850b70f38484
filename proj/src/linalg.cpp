#include "symgame/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symgame {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

void remove_components(const std::vector<std::vector<double>>& basis, std::vector<double>& v) {
  for (const auto& q : basis) {
    const double c = dot(q, v);
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
  }
}

}  // namespace

std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& columns,
                                                double rank_tol) {
  std::vector<std::vector<double>> basis;
  if (columns.empty()) return basis;
  std::vector<std::vector<double>> work = columns;
  double max_norm = 0.0;
  for (const auto& c : work) max_norm = std::max(max_norm, norm2(c));
  if (max_norm == 0.0) return basis;
  const double threshold = rank_tol * max_norm;

  std::vector<char> used(work.size(), 0);
  for (std::size_t step = 0; step < work.size(); ++step) {
    // Pivot on the column with the largest remaining residual.
    int pick = -1;
    double best = threshold;
    for (std::size_t j = 0; j < work.size(); ++j) {
      if (used[j]) continue;
      const double r = norm2(work[j]);
      if (r > best) {
        best = r;
        pick = static_cast<int>(j);
      }
    }
    if (pick < 0) break;
    used[pick] = 1;
    std::vector<double> q = work[pick];
    remove_components(basis, q);  // reorthogonalize
    const double r = norm2(q);
    if (r <= threshold) continue;
    for (double& x : q) x /= r;
    for (std::size_t j = 0; j < work.size(); ++j) {
      if (used[j]) continue;
      const double c = dot(q, work[j]);
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < q.size(); ++i) work[j][i] -= c * q[i];
    }
    basis.push_back(std::move(q));
  }
  return basis;
}

std::vector<std::vector<double>> orthonormal_complement(
    const std::vector<std::vector<double>>& basis, int dim, double rank_tol) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < dim; ++i) {
    std::vector<double> v(dim, 0.0);
    v[i] = 1.0;
    remove_components(basis, v);
    remove_components(out, v);
    double r = norm2(v);
    if (r <= rank_tol) continue;
    for (double& x : v) x /= r;
    // One reorthogonalization pass keeps the basis clean.
    remove_components(basis, v);
    remove_components(out, v);
    r = norm2(v);
    if (r <= 0.5) continue;
    for (double& x : v) x /= r;
    out.push_back(std::move(v));
  }
  return out;
}

double residual_norm(const std::vector<std::vector<double>>& basis, std::span<const double> v) {
  std::vector<double> w(v.begin(), v.end());
  remove_components(basis, w);
  return norm2(w);
}

std::vector<double> project_simplex(std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double acc = 0.0, theta = 0.0;
  int support = 0;
  for (int k = 0; k < n; ++k) {
    acc += sorted[k];
    const double t = (acc - 1.0) / (k + 1);
    if (sorted[k] - t > 0.0) {
      theta = t;
      support = k + 1;
    }
  }
  (void)support;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::max(0.0, y[i] - theta);
  return x;
}

}  // namespace symgame
