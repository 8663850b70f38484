#pragma once

#include <span>
#include <vector>

namespace symgame {

// Orthonormal basis of span(columns) by column-pivoted modified Gram-Schmidt
// with reorthogonalization. Columns whose residual norm falls below
// rank_tol * (largest input norm) are treated as dependent and dropped.
std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& columns,
                                                double rank_tol = 1e-10);

// Orthonormal basis of the orthogonal complement of span(basis) in R^dim;
// `basis` must already be orthonormal.
std::vector<std::vector<double>> orthonormal_complement(
    const std::vector<std::vector<double>>& basis, int dim, double rank_tol = 1e-10);

// Residual norm of v after removing its component in span(basis).
double residual_norm(const std::vector<std::vector<double>>& basis, std::span<const double> v);

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::span<const double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace symgame
