#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpca {

/// Precondition / argument violation (dimension mismatch, out-of-range value, ...).
class contract_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Numerically meaningless state (all weights zero, zero mixing matrix,
/// rank-deficient surrogate, ...).
class degenerate_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {a.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {a.data() + i * cols, cols}; }

    double frobenius_norm() const;
};

/// n observations of dimension m; observation i is row i.
struct DataMatrix {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> values;  // n*m, row-major

    DataMatrix() = default;
    /// Validates n,m >= 1, size consistency and finiteness of every entry.
    DataMatrix(std::size_t n_, std::size_t m_, std::vector<double> values_);

    std::span<const double> row(std::size_t i) const { return {values.data() + i * m, m}; }
    std::span<double> row(std::size_t i) { return {values.data() + i * m, m}; }
};

/// Per-observation weights in [0,1]; all of the reweighting loop's state.
struct WeightVector {
    std::vector<double> alphas;

    static WeightVector ones(std::size_t n) { return WeightVector{std::vector<double>(n, 1.0)}; }

    std::size_t size() const { return alphas.size(); }
    std::size_t nonzero_count() const;
    bool all_zero() const { return nonzero_count() == 0; }
};

/// d orthonormal directions in R^m with their eigenvalues, sorted non-increasing.
struct SubspaceBasis {
    std::size_t d = 0;
    std::size_t m = 0;
    std::vector<double> vectors;      // d*m, vector j is row j
    std::vector<double> eigenvalues;  // d, non-increasing

    std::span<const double> vec(std::size_t j) const { return {vectors.data() + j * m, m}; }
    std::span<double> vec(std::size_t j) { return {vectors.data() + j * m, m}; }
};

/// The mixing matrix A and the outlier index set; used only for scoring.
struct GroundTruth {
    Matrix A;  // m x d_true
    std::vector<std::size_t> outlier_indices;
};

/// Ceiling that first snaps to the nearest integer within a 1e-9 relative
/// tolerance, so expressions like 0.3*100*1.5 land on 45 rather than 46.
std::size_t ceil_count(double x);

}  // namespace rpca
