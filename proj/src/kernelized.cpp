#include "rpca/kernelized.hpp"

#include <chrono>
#include <cmath>

#include "rpca/kernels.hpp"
#include "rpca/numerics.hpp"

namespace rpca {

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    switch (spec.kind) {
        case KernelSpec::Kind::linear:
            return kernels::dot(x.data(), y.data(), x.size());
        case KernelSpec::Kind::gaussian: {
            if (spec.bandwidth <= 0.0) throw contract_error("gaussian kernel: bandwidth <= 0");
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double diff = x[i] - y[i];
                d2 += diff * diff;
            }
            return std::exp(-d2 / (2.0 * spec.bandwidth * spec.bandwidth));
        }
        case KernelSpec::Kind::polynomial: {
            if (spec.degree < 1) throw contract_error("polynomial kernel: degree < 1");
            const double base = kernels::dot(x.data(), y.data(), x.size()) + spec.offset;
            double r = 1.0;
            for (int k = 0; k < spec.degree; ++k) r *= base;
            return r;
        }
    }
    throw contract_error("kernel_eval: unknown kernel kind");
}

Matrix gram(const DataMatrix& data, const KernelSpec& spec) {
    const std::size_t n = data.n;
    Matrix K(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(spec, data.row(i), data.row(j));
            K(i, j) = v;
            K(j, i) = v;
        }
    return K;
}

Matrix center_gram(const Matrix& K) {
    const std::size_t n = K.rows;
    std::vector<double> row_mean(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += K(i, j);
        row_mean[i] = s / static_cast<double>(n);
        total += s;
    }
    const double grand = total / static_cast<double>(n * n);
    Matrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            C(i, j) = K(i, j) - row_mean[i] - row_mean[j] + grand;
    return C;
}

KernelBasis weighted_kernel_pca(const Matrix& K, const WeightVector& weights, std::size_t d) {
    const std::size_t n = K.rows;
    if (K.cols != n) throw contract_error("weighted_kernel_pca: gram matrix not square");
    if (weights.size() != n) throw contract_error("weighted_kernel_pca: weight count != n");
    if (d < 1) throw contract_error("weighted_kernel_pca: d must be >= 1");
    if (d > weights.nonzero_count())
        throw degenerate_error("weighted_kernel_pca: fewer active points than d");

    // Surrogate (1/n) D^{1/2} K D^{1/2}; same nonzero spectrum as the
    // weighted feature second moment.
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(weights.alphas[i]);
    Matrix S(n, n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            S(i, j) = inv_n * sq[i] * K(i, j) * sq[j];

    const SubspaceBasis eig = top_d_eigen(S, d);
    const double floor = 1e-12 * (S.frobenius_norm() + 1.0);
    for (std::size_t q = 0; q < d; ++q)
        if (eig.eigenvalues[q] <= floor)
            throw degenerate_error(
                "weighted_kernel_pca: fewer than d strictly positive eigenvalues");

    // a_i(q) = sqrt(alpha_i / n) v_i(q) / sqrt(beta_q) gives ||w_q|| = 1.
    KernelBasis basis;
    basis.d = d;
    basis.n = n;
    basis.coeff.assign(d * n, 0.0);
    basis.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.end());
    for (std::size_t q = 0; q < d; ++q) {
        const double inv_sqrt_beta = 1.0 / std::sqrt(eig.eigenvalues[q]);
        auto v = eig.vec(q);
        double* out = basis.coeff.data() + q * n;
        for (std::size_t i = 0; i < n; ++i)
            out[i] = sq[i] * std::sqrt(inv_n) * v[i] * inv_sqrt_beta;
    }
    return basis;
}

std::vector<double> kernel_project(const KernelBasis& basis, std::span<const double> k_cross) {
    if (k_cross.size() != basis.n) throw contract_error("kernel_project: k_cross length != n");
    std::vector<double> p(basis.d);
    for (std::size_t q = 0; q < basis.d; ++q)
        p[q] = kernels::dot(basis.vec(q).data(), k_cross.data(), basis.n);
    return p;
}

KernelDhrResult run_kernel_dhr(const DataMatrix& data, const KernelSpec& spec,
                               const DhrConfig& config, const GroundTruth* truth, bool center) {
    const std::size_t n = data.n;
    if (config.t_hat < 1 || config.t_hat > n)
        throw contract_error("run_kernel_dhr: t_hat outside [1, n]");
    if (config.patience < 1) throw contract_error("run_kernel_dhr: patience must be >= 1");

    Matrix K = gram(data, spec);
    if (center) K = center_gram(K);

    const std::size_t max_iters = config.max_iters > 0
                                      ? config.max_iters
                                      : default_max_iters(n, config.t_hat, config.kappa);

    KernelDhrResult result;
    WeightVector weights = WeightVector::ones(n);
    double opt = 0.0;
    std::size_t since_improve = 0;
    bool stopped = false;

    std::vector<double> v(n);  // feature-space point variances

    for (std::size_t s = 1; s <= max_iters && !stopped; ++s) {
        const auto t0 = std::chrono::steady_clock::now();

        const KernelBasis basis = weighted_kernel_pca(K, weights, config.d);

        // Projections of the original observations: rows of K against the
        // coefficient vectors. Candidate score and variances follow.
        std::fill(v.begin(), v.end(), 0.0);
        double candidate = 0.0;
        for (std::size_t q = 0; q < basis.d; ++q) {
            const double* a = basis.coeff.data() + q * n;
            std::vector<double> squares(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double p = kernels::dot(K.a.data() + i * n, a, n);
                squares[i] = p * p;
                v[i] += p * p;
            }
            candidate += trimmed_mean_square(std::move(squares), n, config.t_hat);
        }

        if (candidate > opt * (1.0 + kOptImprovementRelTol)) {
            since_improve = 0;
            result.iters_to_best = s;
        } else {
            ++since_improve;
        }
        if (s == 1 || candidate > opt) {
            opt = candidate;
            result.best_basis = basis;
        }

        TraceRow row;
        row.iter = s;
        row.candidate_opt = candidate;
        row.opt = opt;
        if (truth != nullptr && spec.kind == KernelSpec::Kind::linear && !center) {
            row.ev_candidate = expressed_variance(reconstruct_linear_basis(data, basis), *truth).value;
            row.ev_best =
                expressed_variance(reconstruct_linear_basis(data, result.best_basis), *truth).value;
        }

        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = weights.alphas[i] * v[i];
        if (truth != nullptr) {
            std::vector<bool> is_outlier(n, false);
            for (std::size_t idx : truth->outlier_indices) is_outlier[idx] = true;
            double za = 0.0, oa = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                (is_outlier[i] ? oa : za) += scaled[i];
            row.authentic_wvar = za;
            row.outlier_wvar = oa;
        }

        const std::optional<double> eta = eta_step(scaled, weights, config.var_floor);
        if (!eta.has_value()) {
            result.reason = StopReason::var_floor;
            stopped = true;
        } else {
            weights = weight_update(weights, scaled, *eta);
            if (since_improve >= config.patience) {
                result.reason = StopReason::plateau;
                stopped = true;
            } else if (weights.nonzero_count() <= config.t_hat) {
                result.reason = StopReason::active_count;
                stopped = true;
            }
        }

        row.nonzero_weights = weights.nonzero_count();
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        result.trace.rows.push_back(row);
        result.iterations_run = s;
    }

    if (!stopped) result.reason = StopReason::max_iters;
    result.best_opt = opt;
    result.final_weights = std::move(weights);
    return result;
}

SubspaceBasis reconstruct_linear_basis(const DataMatrix& data, const KernelBasis& basis) {
    SubspaceBasis out;
    out.d = basis.d;
    out.m = data.m;
    out.vectors.assign(basis.d * data.m, 0.0);
    out.eigenvalues = basis.eigenvalues;
    for (std::size_t q = 0; q < basis.d; ++q) {
        auto a = basis.vec(q);
        auto w = out.vec(q);
        for (std::size_t i = 0; i < data.n; ++i)
            kernels::axpy(a[i], data.row(i).data(), w.data(), data.m);
    }
    return out;
}

}  // namespace rpca
