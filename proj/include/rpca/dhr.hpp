#pragma once

#include <limits>
#include <optional>

#include "rpca/estimators.hpp"
#include "rpca/types.hpp"

namespace rpca {

struct DhrConfig {
    std::size_t d = 1;
    std::size_t t_hat = 0;      // required; trim count of the RVE
    std::size_t max_iters = 0;  // 0: ceil((n - t_hat) * (1 + kappa) / kappa), at least 1
    std::size_t patience = 2;   // plateau window (consecutive non-improving iterations)
    double var_floor = 1e-12;   // minimal informative variance
    double kappa = 2.0;         // only used to derive the default max_iters
};

enum class StopReason {
    plateau,
    active_count,    // nonzero-weight count reached t_hat
    var_floor,       // no informative direction left
    max_iters,
    zero_variance,   // HR: removal distribution undefined
    removal_budget,  // HR: max_removals spent
};

const char* stop_reason_name(StopReason r);

struct TraceRow {
    std::size_t iter = 0;           // 1-based
    double opt = 0.0;               // best-so-far RVE sum
    double candidate_opt = 0.0;     // this iteration's RVE sum
    std::size_t nonzero_weights = 0;
    double ev_candidate = std::numeric_limits<double>::quiet_NaN();
    double ev_best = std::numeric_limits<double>::quiet_NaN();
    double authentic_wvar = std::numeric_limits<double>::quiet_NaN();
    double outlier_wvar = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
};

struct DhrResult {
    SubspaceBasis best_basis;
    double best_opt = 0.0;
    RunTrace trace;
    WeightVector final_weights;
    std::size_t iterations_run = 0;
    std::size_t iters_to_best = 0;  // last iteration with a rel-1e-6 improvement
    StopReason reason = StopReason::max_iters;
};

/// v_i = sum_j (w_j . y_i)^2 for every observation.
std::vector<double> point_variances(const DataMatrix& data, const SubspaceBasis& basis);

/// eta = 1 / max{variances[i] : alpha_i != 0}. Returns nullopt when the
/// largest active variance is at or below var_floor (no informative
/// direction; the caller terminates). Throws degenerate_error when all
/// weights are zero.
std::optional<double> eta_step(std::span<const double> variances, const WeightVector& weights,
                               double var_floor);

/// alpha_i <- alpha_i * (1 - eta * variances[i]) on active points; snaps to
/// exact zero when 1 - eta*v <= 1e-15. Zero weights stay zero.
WeightVector weight_update(const WeightVector& weights, std::span<const double> variances,
                           double eta);

/// The deterministic reweighting loop. Candidates are scored by rve_sum on
/// the original data; the best-so-far basis is returned.
DhrResult run_dhr(const DataMatrix& data, const DhrConfig& config,
                  const GroundTruth* truth = nullptr);

inline constexpr double kOptImprovementRelTol = 1e-6;

std::size_t default_max_iters(std::size_t n, std::size_t t_hat, double kappa);

}  // namespace rpca
