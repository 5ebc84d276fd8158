#pragma once

#include <functional>

#include "rpca/types.hpp"

namespace rpca {

/// y := S * x for a symmetric operator S of size m.
using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

/// Sigma = (1/n) * sum_i alpha_i * y_i y_i^T. Symmetric PSD.
/// Throws contract_error on dimension mismatch, degenerate_error if all
/// weights are zero.
Matrix weighted_second_moment(const DataMatrix& data, const WeightVector& weights);

/// Top-d eigenpairs of a symmetric PSD matrix via deflated power iteration.
/// Residual contract: ||S w_j - lambda_j w_j|| <= 1e-8 * (||S||_F + 1).
SubspaceBasis top_d_eigen(const Matrix& sigma, std::size_t d);

/// Matrix-free form; `scale` is a norm estimate of the operator (e.g. its
/// Frobenius norm) used only for convergence tolerances.
SubspaceBasis top_d_eigen(const MatVec& apply, std::size_t m, std::size_t d, double scale);

}  // namespace rpca
