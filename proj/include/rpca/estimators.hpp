#pragma once

#include <functional>

#include "rpca/types.hpp"

namespace rpca {

/// (1/n) times the sum of the t_hat smallest entries of `squares`; the
/// trimming step shared by the linear and kernel RVE paths.
double trimmed_mean_square(std::vector<double> squares, std::size_t n, std::size_t t_hat);

/// Trimmed variance estimate along a unit direction w: (1/n) times the sum
/// of the t_hat smallest squared projections |w^T y_i|^2, always evaluated
/// on the original observation set.
double rve(const DataMatrix& data, std::span<const double> w, std::size_t t_hat);

/// Sum of rve over the basis directions; each direction trims independently.
double rve_sum(const DataMatrix& data, const SubspaceBasis& basis, std::size_t t_hat);

struct EvScore {
    double value = 0.0;
    double numerator = 0.0;    // sum_j ||A^T w_j||^2
    double denominator = 0.0;  // sum of the top-d eigenvalues of A A^T
};

/// Fraction of the signal variance captured by the basis; 1 iff the basis
/// spans the top-d eigenspace of A A^T.
EvScore expressed_variance(const SubspaceBasis& basis, const GroundTruth& truth);

/// Standard normal quantile (inverse CDF), accurate to ~1e-15.
double probit(double p);

/// V(alpha) for the standard Gaussian margin: the variance contribution of
/// the central alpha-probability mass. Closed form alpha - 2 c phi(c) with
/// c = probit((1+alpha)/2); V(0)=0, V(1)=1, monotone and continuous.
double gaussian_tail_weight(double alpha);

using TailWeight = std::function<double(double)>;

struct BoundResult {
    double value = 0.0;
    double argmax_kappa = 0.0;  // 0 means the kappa -> 0 limit
    bool feasible = false;      // false: every grid point left [0,1]
};

inline constexpr double kBoundKappaMin = 1e-3;
inline constexpr double kBoundKappaMax = 1e3;
inline constexpr std::size_t kBoundKappaPoints = 2000;

/// Asymptotic lower bound on the expressed variance: the maximum over a
/// log-spaced kappa grid of
///   [V(1 - l(1+k)/((1-l)k)) / (1+k)] * [V(t_ratio - l/(1-l)) / V(t_ratio)]
/// where l = lambda_star and t_ratio = t_hat/t. Grid points that push any
/// V argument outside [0,1] are skipped. lambda_star = 0 returns exactly 1
/// (the kappa -> 0 limit attains the supremum).
BoundResult asymptotic_bound(double lambda_star, double t_ratio,
                             const TailWeight& tail = gaussian_tail_weight);

/// Iteration budget ceil(lambda * n * (1+kappa) / kappa) within which a
/// good-output event is guaranteed.
std::size_t s0_bound(double lambda, std::size_t n, double kappa);

}  // namespace rpca
