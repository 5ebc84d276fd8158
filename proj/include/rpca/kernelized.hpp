#pragma once

#include "rpca/dhr.hpp"
#include "rpca/types.hpp"

namespace rpca {

struct KernelSpec {
    enum class Kind { linear, gaussian, polynomial };

    Kind kind = Kind::linear;
    double bandwidth = 1.0;  // gaussian: k(x,y) = exp(-||x-y||^2 / (2 bw^2))
    int degree = 2;          // polynomial: k(x,y) = (<x,y> + offset)^degree
    double offset = 1.0;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// K[i,j] = k(y_i, y_j); symmetric PSD.
Matrix gram(const DataMatrix& data, const KernelSpec& spec);

/// Double-centering transform K <- H K H with H = I - (1/n) 1 1^T.
Matrix center_gram(const Matrix& K);

/// Expansion coefficients of d feature-space directions over the mapped
/// observations: w_q = sum_i coeff(q,i) phi(y_i), unit feature-space norm.
struct KernelBasis {
    std::size_t d = 0;
    std::size_t n = 0;
    std::vector<double> coeff;        // d*n, direction q is row q
    std::vector<double> eigenvalues;  // of the weighted feature second moment

    std::span<const double> vec(std::size_t q) const { return {coeff.data() + q * n, n}; }
};

/// Top-d directions of (1/n) sum_i alpha_i phi(y_i) phi(y_i)^T, solved via
/// the n x n surrogate (1/n) D^{1/2} K D^{1/2} with D = diag(alpha).
/// Throws degenerate_error when fewer than d surrogate eigenvalues are
/// strictly positive.
KernelBasis weighted_kernel_pca(const Matrix& K, const WeightVector& weights, std::size_t d);

/// Feature-space projections <w_q, phi(v)> = sum_j coeff(q,j) k(y_j, v);
/// k_cross holds k(y_j, v) for all j.
std::vector<double> kernel_project(const KernelBasis& basis, std::span<const double> k_cross);

struct KernelDhrResult {
    KernelBasis best_basis;
    double best_opt = 0.0;
    RunTrace trace;
    WeightVector final_weights;
    std::size_t iterations_run = 0;
    std::size_t iters_to_best = 0;
    StopReason reason = StopReason::max_iters;
};

/// The reweighting loop with the PCA step replaced by weighted kernel PCA;
/// RVE and point variances use feature-space projections of the original
/// data. With the linear kernel this reproduces run_dhr (up to roundoff).
/// Centering is off by default; `center` applies center_gram to K first.
KernelDhrResult run_kernel_dhr(const DataMatrix& data, const KernelSpec& spec,
                               const DhrConfig& config, const GroundTruth* truth = nullptr,
                               bool center = false);

/// Explicit w_q = sum_i coeff(q,i) y_i; meaningful for the linear kernel.
SubspaceBasis reconstruct_linear_basis(const DataMatrix& data, const KernelBasis& basis);

}  // namespace rpca
