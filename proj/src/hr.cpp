#include "rpca/hr.hpp"

#include <chrono>
#include <random>

#include "rpca/numerics.hpp"

namespace rpca {

double canonical_uniform(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::size_t sample_categorical(std::span<const double> mass, double u) {
    double total = 0.0;
    for (double v : mass) total += v;
    if (total <= 0.0) throw degenerate_error("sample_categorical: total mass not positive");
    const double target = u * total;
    double cum = 0.0;
    std::size_t last_positive = mass.size();
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] <= 0.0) continue;
        cum += mass[i];
        last_positive = i;
        if (cum > target) return i;
    }
    return last_positive;  // guards u ~ 1 with rounding in the running sum
}

DhrResult run_hr(const DataMatrix& data, const HrConfig& config, const GroundTruth* truth) {
    const std::size_t n = data.n;
    if (config.d < 1 || config.d > data.m) throw contract_error("run_hr: d outside [1, m]");
    if (config.t_hat < 1 || config.t_hat > n) throw contract_error("run_hr: t_hat outside [1, n]");
    const std::size_t max_removals =
        config.max_removals == HrConfig::kDefault ? n - config.t_hat : config.max_removals;
    if (max_removals > n - 1) throw contract_error("run_hr: max_removals > n - 1");

    std::mt19937_64 rng(config.seed);

    DhrResult result;
    WeightVector weights = WeightVector::ones(n);  // binary: active points have weight 1
    double opt = 0.0;
    std::size_t removals_done = 0;

    for (std::size_t s = 1;; ++s) {
        const auto t0 = std::chrono::steady_clock::now();

        const Matrix sigma = weighted_second_moment(data, weights);
        const SubspaceBasis basis = top_d_eigen(sigma, config.d);
        const double candidate = rve_sum(data, basis, config.t_hat);

        if (candidate > opt * (1.0 + kOptImprovementRelTol)) result.iters_to_best = s;
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

        const std::vector<double> v = point_variances(data, basis);
        if (truth != nullptr) {
            std::vector<bool> is_outlier(n, false);
            for (std::size_t idx : truth->outlier_indices) is_outlier[idx] = true;
            double za = 0.0, oa = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                (is_outlier[i] ? oa : za) += weights.alphas[i] * v[i];
            row.authentic_wvar = za;
            row.outlier_wvar = oa;
        }

        bool stopped = false;
        if (removals_done >= max_removals || weights.nonzero_count() <= config.t_hat) {
            result.reason = StopReason::removal_budget;
            stopped = true;
        } else {
            std::vector<double> mass(n, 0.0);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (weights.alphas[i] == 0.0) continue;
                mass[i] = v[i];
                total += v[i];
            }
            if (total <= 0.0) {
                result.reason = StopReason::zero_variance;
                stopped = true;
            } else {
                const double u = canonical_uniform(rng());
                const std::size_t removed = sample_categorical(mass, u);
                weights.alphas[removed] = 0.0;
                ++removals_done;
            }
        }

        row.nonzero_weights = weights.nonzero_count();
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        result.trace.rows.push_back(row);
        result.iterations_run = s;
        if (stopped) break;
    }

    result.best_opt = opt;
    result.final_weights = std::move(weights);
    return result;
}

}  // namespace rpca
