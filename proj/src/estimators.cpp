#include "rpca/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rpca/kernels.hpp"
#include "rpca/numerics.hpp"

namespace rpca {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2_v<double> / 2.0); }

std::vector<double> squared_projections(const DataMatrix& data, std::span<const double> w) {
    std::vector<double> p(data.n);
    for (std::size_t i = 0; i < data.n; ++i) {
        const double proj = kernels::dot(data.row(i).data(), w.data(), data.m);
        p[i] = proj * proj;
    }
    return p;
}

}  // namespace

double trimmed_mean_square(std::vector<double> squares, std::size_t n, std::size_t t_hat) {
    std::sort(squares.begin(), squares.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < t_hat; ++i) sum += squares[i];
    return sum / static_cast<double>(n);
}

double rve(const DataMatrix& data, std::span<const double> w, std::size_t t_hat) {
    if (w.size() != data.m) throw contract_error("rve: direction length != m");
    if (t_hat > data.n) throw contract_error("rve: t_hat > n");
    const double norm = std::sqrt(kernels::dot(w.data(), w.data(), w.size()));
    if (std::abs(norm - 1.0) > 1e-8) throw contract_error("rve: direction is not unit length");
    return trimmed_mean_square(squared_projections(data, w), data.n, t_hat);
}

double rve_sum(const DataMatrix& data, const SubspaceBasis& basis, std::size_t t_hat) {
    double total = 0.0;
    for (std::size_t j = 0; j < basis.d; ++j) total += rve(data, basis.vec(j), t_hat);
    return total;
}

EvScore expressed_variance(const SubspaceBasis& basis, const GroundTruth& truth) {
    const Matrix& A = truth.A;
    if (A.rows != basis.m) throw contract_error("expressed_variance: dimension mismatch");
    const std::size_t d_true = A.cols;

    double a_norm2 = 0.0;
    for (double v : A.a) a_norm2 += v * v;
    if (a_norm2 == 0.0) throw degenerate_error("expressed_variance: zero mixing matrix");

    // Numerator: sum_j ||A^T w_j||^2.
    double num = 0.0;
    std::vector<double> atw(d_true);
    for (std::size_t j = 0; j < basis.d; ++j) {
        auto w = basis.vec(j);
        for (std::size_t c = 0; c < d_true; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < A.rows; ++r) s += A(r, c) * w[r];
            atw[c] = s;
        }
        num += kernels::dot(atw.data(), atw.data(), d_true);
    }

    // Denominator: sum of the top-d eigenvalues of A A^T, which match the
    // eigenvalues of the small d_true x d_true matrix A^T A (padded by zeros).
    Matrix ata(d_true, d_true);
    for (std::size_t i = 0; i < d_true; ++i)
        for (std::size_t j = i; j < d_true; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < A.rows; ++r) s += A(r, i) * A(r, j);
            ata(i, j) = s;
            ata(j, i) = s;
        }
    const std::size_t k = std::min(basis.d, d_true);
    const SubspaceBasis eig = top_d_eigen(ata, k);
    double den = 0.0;
    for (std::size_t j = 0; j < k; ++j) den += eig.eigenvalues[j];
    if (den <= 0.0) throw degenerate_error("expressed_variance: zero signal variance");

    return EvScore{num / den, num, den};
}

double probit(double p) {
    if (p <= 0.0 || p >= 1.0) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw contract_error("probit: p outside [0,1]");
    }

    // Acklam's rational approximation, then one Halley refinement.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }

    const double e = std_normal_cdf(x) - p;
    const double u = e / std_normal_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double gaussian_tail_weight(double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw contract_error("gaussian_tail_weight: alpha outside [0,1]");
    if (alpha == 0.0) return 0.0;
    if (alpha == 1.0) return 1.0;
    const double c = probit(0.5 * (1.0 + alpha));
    return alpha - 2.0 * c * std_normal_pdf(c);
}

BoundResult asymptotic_bound(double lambda_star, double t_ratio, const TailWeight& tail) {
    if (lambda_star < 0.0 || lambda_star >= 0.5)
        throw contract_error("asymptotic_bound: lambda_star outside [0, 0.5)");
    if (t_ratio <= 0.0 || t_ratio > 1.0)
        throw contract_error("asymptotic_bound: t_ratio outside (0, 1]");

    if (lambda_star == 0.0) return BoundResult{1.0, 0.0, true};

    const double shift = lambda_star / (1.0 - lambda_star);
    const double b = t_ratio - shift;
    if (b < 0.0 || b > 1.0) return BoundResult{0.0, 0.0, false};
    const double second = tail(b) / tail(t_ratio);

    const double log_min = std::log(kBoundKappaMin);
    const double log_max = std::log(kBoundKappaMax);
    BoundResult best{0.0, 0.0, false};
    for (std::size_t i = 0; i < kBoundKappaPoints; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(kBoundKappaPoints - 1);
        const double kappa = std::exp(log_min + t * (log_max - log_min));
        const double arg = 1.0 - shift * (1.0 + kappa) / kappa;
        if (arg < 0.0 || arg > 1.0) continue;
        const double value = tail(arg) / (1.0 + kappa) * second;
        if (!best.feasible || value > best.value) best = BoundResult{value, kappa, true};
    }
    return best;
}

std::size_t s0_bound(double lambda, std::size_t n, double kappa) {
    if (kappa <= 0.0) throw contract_error("s0_bound: kappa must be positive");
    if (lambda < 0.0 || lambda >= 0.5) throw contract_error("s0_bound: lambda outside [0, 0.5)");
    return ceil_count(lambda * static_cast<double>(n) * (1.0 + kappa) / kappa);
}

}  // namespace rpca
