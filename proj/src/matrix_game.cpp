#include "symgame/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace symgame {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;
constexpr int kIterCap = 50000;
constexpr int kStallLimit = 60;

// Dense tableau for min c'x s.t. Ax = b, x >= 0 (b >= 0), solved in two
// phases. Default pivoting picks the most negative reduced cost and, among
// minimum-ratio rows, the largest pivot element (tiny pivots wreck the
// tableau); after a long degenerate stall it falls back to Bland's rule
// until the objective moves again.
class Simplex {
 public:
  Simplex(int rows, int cols) : m_(rows), n_(cols) {}

  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterLimit };

  void set_problem(std::vector<double> a, std::vector<double> b) {
    a_in_ = std::move(a);
    b_in_ = std::move(b);
  }

  Status solve(const std::vector<double>& cost, std::vector<double>* solution,
               double* objective, bool* unique_hint) {
    basis_.resize(m_);
    art_start_ = n_;
    total_ = n_ + m_;
    t_.assign(static_cast<std::size_t>(m_) * (total_ + 1), 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) cell(i, j) = a_in_[i * n_ + j];
      cell(i, art_start_ + i) = 1.0;
      cell(i, total_) = b_in_[i];
      basis_[i] = art_start_ + i;
    }
    std::vector<double> phase1_cost(total_, 0.0);
    for (int i = 0; i < m_; ++i) phase1_cost[art_start_ + i] = 1.0;
    build_cost_row(phase1_cost);
    Status st = iterate(/*allow_artificial=*/true);
    if (st != Status::kOptimal) return st;
    if (-cost_[total_] > 1e-8) return Status::kInfeasible;
    drive_out_artificials();

    std::vector<double> full_cost(total_, 0.0);
    for (int j = 0; j < n_; ++j) full_cost[j] = cost[j];
    build_cost_row(full_cost);
    st = iterate(/*allow_artificial=*/false);
    if (st != Status::kOptimal) return st;

    solution->assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) (*solution)[basis_[i]] = cell(i, total_);
    *objective = -cost_[total_];
    if (unique_hint) {
      bool unique = true;
      std::vector<char> in_basis(total_, 0);
      for (int i = 0; i < m_; ++i) in_basis[basis_[i]] = 1;
      for (int j = 0; j < n_; ++j)
        if (!in_basis[j] && cost_[j] <= kCostTol) unique = false;
      *unique_hint = unique;
    }
    return Status::kOptimal;
  }

 private:
  double& cell(int i, int j) { return t_[static_cast<std::size_t>(i) * (total_ + 1) + j]; }

  void build_cost_row(const std::vector<double>& c) {
    cost_.assign(total_ + 1, 0.0);
    for (int j = 0; j <= total_; ++j) {
      double v = (j < total_) ? c[j] : 0.0;
      for (int i = 0; i < m_; ++i) v -= c[basis_[i]] * cell(i, j);
      cost_[j] = v;
    }
  }

  void pivot(int r, int e) {
    const double p = cell(r, e);
    for (int j = 0; j <= total_; ++j) cell(r, j) /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = cell(i, e);
      if (f == 0.0) continue;
      for (int j = 0; j <= total_; ++j) cell(i, j) -= f * cell(r, j);
      if (cell(i, total_) < 0.0 && cell(i, total_) > -1e-12) cell(i, total_) = 0.0;
    }
    const double fc = cost_[e];
    if (fc != 0.0)
      for (int j = 0; j <= total_; ++j) cost_[j] -= fc * cell(r, j);
    basis_[r] = e;
  }

  int pick_entering(bool allow_artificial, bool bland) const {
    const int limit = allow_artificial ? total_ : art_start_;
    int enter = -1;
    double best = -kCostTol;
    for (int j = 0; j < limit; ++j) {
      if (cost_[j] >= -kCostTol) continue;
      if (bland) return j;
      if (cost_[j] < best) {
        best = cost_[j];
        enter = j;
      }
    }
    return enter;
  }

  int pick_leaving(int enter, bool bland) {
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      const double d = cell(i, enter);
      if (d > kPivotTol) min_ratio = std::min(min_ratio, cell(i, total_) / d);
    }
    if (!std::isfinite(min_ratio)) return -1;
    int leave = -1;
    double best_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double d = cell(i, enter);
      if (d <= kPivotTol) continue;
      const double ratio = cell(i, total_) / d;
      if (ratio > min_ratio + 1e-9 * (1.0 + min_ratio)) continue;
      if (bland) {
        if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
      } else if (d > best_pivot) {
        best_pivot = d;
        leave = i;
      }
    }
    return leave;
  }

  Status iterate(bool allow_artificial) {
    bool bland = false;
    int stall = 0;
    double last_obj = -cost_[total_];
    for (int it = 0; it < kIterCap; ++it) {
      const int enter = pick_entering(allow_artificial, bland);
      if (enter < 0) return Status::kOptimal;
      const int leave = pick_leaving(enter, bland);
      if (leave < 0) return Status::kUnbounded;
      pivot(leave, enter);
      const double obj = -cost_[total_];
      if (obj < last_obj - 1e-12) {
        stall = 0;
        bland = false;
        last_obj = obj;
      } else if (++stall > kStallLimit) {
        bland = true;
      }
    }
    return Status::kIterLimit;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < art_start_) continue;
      int e = -1;
      double best = 1e-7;  // healthy pivots only; dependent rows stay inert
      for (int j = 0; j < art_start_; ++j) {
        if (std::abs(cell(i, j)) > best) {
          best = std::abs(cell(i, j));
          e = j;
        }
      }
      if (e >= 0) pivot(i, e);
    }
  }

  int m_, n_, art_start_ = 0, total_ = 0;
  std::vector<double> t_, cost_, a_in_, b_in_;
  std::vector<int> basis_;
};

struct LpOut {
  bool ok = false;
  std::vector<double> x;
  double obj = 0.0;
  bool unique = true;
  Simplex::Status status = Simplex::Status::kOptimal;
};

const char* status_name(Simplex::Status st) {
  switch (st) {
    case Simplex::Status::kOptimal: return "optimal";
    case Simplex::Status::kInfeasible: return "infeasible";
    case Simplex::Status::kUnbounded: return "unbounded";
    case Simplex::Status::kIterLimit: return "iteration limit";
  }
  return "?";
}

LpOut solve_lp(int m, int n, const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<double>& c) {
  Simplex s(m, n);
  s.set_problem(a, b);
  LpOut out;
  double obj = 0.0;
  out.status = s.solve(c, &out.x, &obj, &out.unique);
  out.ok = (out.status == Simplex::Status::kOptimal);
  out.obj = obj;
  return out;
}

double guarantee(int n, std::span<const double> payoff, const std::vector<double>& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) col += x[i] * payoff[i * n + j];
    worst = std::min(worst, col);
  }
  return worst;
}

// Vertices of the optimal face found by maximizing each coordinate in turn.
std::vector<std::vector<double>> optimal_face_vertices(int n, std::span<const double> payoff,
                                                       double shift, double shifted_value) {
  // Variables (x, sigma): sum_i (M+shift)_{ij} x_i - sigma_j = v' - eps; sum x = 1.
  const double eps = 1e-10;
  const int m = n + 1;
  const int cols = 2 * n;
  std::vector<double> a(m * cols, 0.0), b(m, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a[j * cols + i] = payoff[i * n + j] + shift;
    a[j * cols + n + j] = -1.0;
    b[j] = shifted_value - eps;
  }
  for (int i = 0; i < n; ++i) a[n * cols + i] = 1.0;
  b[n] = 1.0;

  std::vector<std::vector<double>> found;
  for (int k = 0; k < n; ++k) {
    std::vector<double> c(cols, 0.0);
    c[k] = -1.0;  // maximize x_k
    LpOut out = solve_lp(m, cols, a, b, c);
    if (!out.ok) continue;
    std::vector<double> x(out.x.begin(), out.x.begin() + n);
    bool dup = false;
    for (const auto& prev : found) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(prev[i] - x[i]));
      if (d <= 1e-8) {
        dup = true;
        break;
      }
    }
    if (!dup) found.push_back(std::move(x));
  }
  return found;
}

std::vector<double> lowest_index_support(const std::vector<std::vector<double>>& vertices) {
  auto support = [](const std::vector<double>& x) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(x.size()); ++i)
      if (x[i] > 1e-9) idx.push_back(i);
    return idx;
  };
  int best = 0;
  std::vector<int> best_sup = support(vertices[0]);
  for (int k = 1; k < static_cast<int>(vertices.size()); ++k) {
    std::vector<int> sup = support(vertices[k]);
    if (std::lexicographical_compare(sup.begin(), sup.end(), best_sup.begin(), best_sup.end())) {
      best = k;
      best_sup = std::move(sup);
    }
  }
  return vertices[best];
}

}  // namespace

MatrixGameSolution solve_matrix_game(int n, std::span<const double> payoff_row_major) {
  if (n < 1 || static_cast<int>(payoff_row_major.size()) != n * n)
    throw std::invalid_argument("solve_matrix_game: bad shape");
  for (double x : payoff_row_major)
    if (!std::isfinite(x)) throw std::invalid_argument("solve_matrix_game: non-finite entry");
  if (n == 1) return {payoff_row_major[0], {1.0}};

  double max_abs = 0.0;
  for (double x : payoff_row_major) max_abs = std::max(max_abs, std::abs(x));
  const double shift = 1.0 + max_abs;

  // Variables (x, v', sigma): for each column j,
  //   sum_i (M+shift)_{ij} x_i - v' - sigma_j = 0,   sum_i x_i = 1,
  // maximizing v'. The shifted value stays positive, so v' >= 0 cuts nothing.
  const int m = n + 1;
  const int cols = 2 * n + 1;
  std::vector<double> a(m * cols, 0.0), b(m, 0.0), c(cols, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a[j * cols + i] = payoff_row_major[i * n + j] + shift;
    a[j * cols + n] = -1.0;
    a[j * cols + n + 1 + j] = -1.0;
  }
  for (int i = 0; i < n; ++i) a[n * cols + i] = 1.0;
  b[n] = 1.0;
  c[n] = -1.0;

  LpOut out = solve_lp(m, cols, a, b, c);
  if (!out.ok)
    throw std::runtime_error(std::string("solve_matrix_game: simplex failed (") +
                             status_name(out.status) + ")");
  std::vector<double> x(out.x.begin(), out.x.begin() + n);
  const double shifted_value = out.x[n];
  const double value = shifted_value - shift;

  if (!out.unique) {
    auto vertices = optimal_face_vertices(n, payoff_row_major, shift, shifted_value);
    if (!vertices.empty()) {
      std::vector<double> avg(n, 0.0);
      for (const auto& vx : vertices)
        for (int i = 0; i < n; ++i) avg[i] += vx[i] / vertices.size();
      if (guarantee(n, payoff_row_major, avg) >= value - 1e-9) {
        x = std::move(avg);
      } else {
        vertices.push_back(x);
        x = lowest_index_support(vertices);
      }
    }
  }
  return {value, std::move(x)};
}

}  // namespace symgame
