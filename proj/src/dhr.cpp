#include "rpca/dhr.hpp"

#include <chrono>
#include <cmath>

#include "rpca/kernels.hpp"
#include "rpca/numerics.hpp"

namespace rpca {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::plateau: return "plateau";
        case StopReason::active_count: return "active-count";
        case StopReason::var_floor: return "var-floor";
        case StopReason::max_iters: return "max-iters";
        case StopReason::zero_variance: return "zero-variance";
        case StopReason::removal_budget: return "removal-budget";
    }
    return "unknown";
}

std::size_t default_max_iters(std::size_t n, std::size_t t_hat, double kappa) {
    const double budget = static_cast<double>(n - t_hat) * (1.0 + kappa) / kappa;
    return std::max<std::size_t>(1, ceil_count(budget));
}

std::vector<double> point_variances(const DataMatrix& data, const SubspaceBasis& basis) {
    if (basis.m != data.m) throw contract_error("point_variances: dimension mismatch");
    std::vector<double> v(data.n, 0.0);
    for (std::size_t j = 0; j < basis.d; ++j) {
        auto w = basis.vec(j);
        for (std::size_t i = 0; i < data.n; ++i) {
            const double p = kernels::dot(data.row(i).data(), w.data(), data.m);
            v[i] += p * p;
        }
    }
    return v;
}

std::optional<double> eta_step(std::span<const double> variances, const WeightVector& weights,
                               double var_floor) {
    if (variances.size() != weights.size())
        throw contract_error("eta_step: variance count != weight count");
    double vmax = -1.0;
    for (std::size_t i = 0; i < variances.size(); ++i)
        if (weights.alphas[i] != 0.0 && variances[i] > vmax) vmax = variances[i];
    if (vmax < 0.0) throw degenerate_error("eta_step: all weights are zero");
    if (vmax <= var_floor) return std::nullopt;
    return 1.0 / vmax;
}

WeightVector weight_update(const WeightVector& weights, std::span<const double> variances,
                           double eta) {
    if (variances.size() != weights.size())
        throw contract_error("weight_update: variance count != weight count");
    WeightVector updated = weights;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double a = weights.alphas[i];
        if (a == 0.0) continue;
        const double step = eta * variances[i];
        if (step > 1.0 + 1e-12)
            throw contract_error("weight_update: eta exceeds 1/max variance");
        const double factor = 1.0 - step;
        updated.alphas[i] = factor <= 1e-15 ? 0.0 : a * factor;
    }
    return updated;
}

namespace {

struct ClassSums {
    double authentic = 0.0;
    double outlier = 0.0;
};

ClassSums class_weighted_variances(const std::vector<double>& v, const WeightVector& w,
                                   const GroundTruth& truth, std::size_t n) {
    std::vector<bool> is_outlier(n, false);
    for (std::size_t idx : truth.outlier_indices) is_outlier[idx] = true;
    ClassSums s;
    for (std::size_t i = 0; i < n; ++i) {
        const double term = w.alphas[i] * v[i];
        if (is_outlier[i]) s.outlier += term;
        else s.authentic += term;
    }
    return s;
}

}  // namespace

DhrResult run_dhr(const DataMatrix& data, const DhrConfig& config, const GroundTruth* truth) {
    const std::size_t n = data.n;
    if (config.d < 1 || config.d > data.m) throw contract_error("run_dhr: d outside [1, m]");
    if (config.t_hat < 1 || config.t_hat > n) throw contract_error("run_dhr: t_hat outside [1, n]");
    if (config.patience < 1) throw contract_error("run_dhr: patience must be >= 1");
    if (config.var_floor <= 0.0) throw contract_error("run_dhr: var_floor must be positive");

    const std::size_t max_iters = config.max_iters > 0
                                      ? config.max_iters
                                      : default_max_iters(n, config.t_hat, config.kappa);

    DhrResult result;
    WeightVector weights = WeightVector::ones(n);
    double opt = 0.0;
    std::size_t since_improve = 0;
    bool stopped = false;

    for (std::size_t s = 1; s <= max_iters && !stopped; ++s) {
        const auto t0 = std::chrono::steady_clock::now();

        const Matrix sigma = weighted_second_moment(data, weights);
        const SubspaceBasis basis = top_d_eigen(sigma, config.d);
        const double candidate = rve_sum(data, basis, config.t_hat);

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
        if (truth != nullptr) {
            row.ev_candidate = expressed_variance(basis, *truth).value;
            row.ev_best = expressed_variance(result.best_basis, *truth).value;
        }

        // Weight step on the sqrt(alpha)-scaled working points: the squared
        // projections entering steps 4-5 are alpha_i * v_i.
        const std::vector<double> v = point_variances(data, basis);
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = weights.alphas[i] * v[i];

        if (truth != nullptr) {
            const ClassSums sums = class_weighted_variances(v, weights, *truth, n);
            row.authentic_wvar = sums.authentic;
            row.outlier_wvar = sums.outlier;
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

}  // namespace rpca
