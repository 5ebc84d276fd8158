#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rpca/estimators.hpp"
#include "rpca/numerics.hpp"

using namespace rpca;

TEST_CASE("rve: hand instance with projections {1,-2,3,0.5}") {
    // One-dimensional observations; w = (1) so projections are the values.
    DataMatrix data(4, 1, {1.0, -2.0, 3.0, 0.5});
    const double w[] = {1.0};
    CHECK(rve(data, {w, 1}, 2) == doctest::Approx(0.3125).epsilon(1e-14));
    CHECK(oracle::rve_sort_trim(data, {w, 1}, 2) == doctest::Approx(0.3125).epsilon(1e-14));
}

TEST_CASE("rve: t_hat = n is the untrimmed second moment along w") {
    std::mt19937_64 rng(1);
    const DataMatrix data = oracle::random_data(rng, 10, 3);
    const SubspaceBasis w = oracle::random_orthonormal(rng, 1, 3);
    double full = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
        double p = 0.0;
        for (std::size_t j = 0; j < 3; ++j) p += data.values[i * 3 + j] * w.vec(0)[j];
        full += p * p;
    }
    full /= static_cast<double>(data.n);
    CHECK(rve(data, w.vec(0), data.n) == doctest::Approx(full).epsilon(1e-12));
}

TEST_CASE("rve: direction orthogonal to all observations gives zero") {
    DataMatrix data(3, 2, {1.0, 0.0, 2.0, 0.0, -1.0, 0.0});
    const double w[] = {0.0, 1.0};
    for (std::size_t t = 1; t <= 3; ++t) CHECK(rve(data, {w, 2}, t) == 0.0);
}

TEST_CASE("rve: contract violations") {
    DataMatrix data(2, 2, {1.0, 0.0, 0.0, 1.0});
    const double w[] = {1.0, 0.0};
    const double bad[] = {2.0, 0.0};
    CHECK_THROWS_AS(rve(data, {w, 2}, 3), contract_error);
    CHECK_THROWS_AS(rve(data, {bad, 2}, 1), contract_error);
}

TEST_CASE("rve matches the sort-and-trim oracle on random instances") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> nd(2, 30), md(1, 8);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = nd(rng), m = md(rng);
        const DataMatrix data = oracle::random_data(rng, n, m, 2.0);
        const SubspaceBasis w = oracle::random_orthonormal(rng, 1, m);
        std::uniform_int_distribution<std::size_t> td(1, n);
        const std::size_t t_hat = td(rng);
        const double got = rve(data, w.vec(0), t_hat);
        const double want = oracle::rve_sort_trim(data, w.vec(0), t_hat);
        CHECK(std::abs(got - want) <= 1e-12 * (want + 1.0));
    }
}

TEST_CASE("rve is monotone in t_hat and bounded by the full moment") {
    std::mt19937_64 rng(7);
    const DataMatrix data = oracle::random_data(rng, 20, 4, 3.0);
    const SubspaceBasis w = oracle::random_orthonormal(rng, 1, 4);
    double prev = 0.0;
    const double full = rve(data, w.vec(0), data.n);
    for (std::size_t t = 1; t <= data.n; ++t) {
        const double v = rve(data, w.vec(0), t);
        CHECK(v >= prev);
        CHECK(v <= full + 1e-15);
        prev = v;
    }
}

TEST_CASE("rve_sum: singleton equals rve; full orthonormal basis is Parseval") {
    std::mt19937_64 rng(9);
    const DataMatrix data = oracle::random_data(rng, 8, 5);
    SubspaceBasis basis = oracle::random_orthonormal(rng, 5, 5);

    SubspaceBasis single = oracle::random_orthonormal(rng, 1, 5);
    CHECK(rve_sum(data, single, 4) == doctest::Approx(rve(data, single.vec(0), 4)));

    double norms = 0.0;
    for (std::size_t i = 0; i < data.n; ++i)
        for (std::size_t j = 0; j < data.m; ++j)
            norms += data.values[i * 5 + j] * data.values[i * 5 + j];
    norms /= static_cast<double>(data.n);
    CHECK(rve_sum(data, basis, data.n) == doctest::Approx(norms).epsilon(1e-12));
}

TEST_CASE("rve_sum trims independently per direction") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const DataMatrix data = oracle::random_data(rng, 5, 3);
        const SubspaceBasis basis = oracle::random_orthonormal(rng, 2, 3);
        std::uniform_int_distribution<std::size_t> td(1, 5);
        const std::size_t t_hat = td(rng);
        const double want = oracle::rve_sort_trim(data, basis.vec(0), t_hat) +
                            oracle::rve_sort_trim(data, basis.vec(1), t_hat);
        CHECK(rve_sum(data, basis, t_hat) == doctest::Approx(want).epsilon(1e-12));
    }
}

namespace {

GroundTruth random_truth(std::mt19937_64& rng, std::size_t m, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    GroundTruth t;
    t.A = Matrix(m, d);
    for (double& v : t.A.a) v = g(rng);
    return t;
}

}  // namespace

TEST_CASE("expressed_variance: recovering the true eigenvectors scores 1") {
    std::mt19937_64 rng(21);
    const std::size_t m = 6, d = 2;
    const GroundTruth truth = random_truth(rng, m, d);

    Matrix aat(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < d; ++k) aat(i, j) += truth.A(i, k) * truth.A(j, k);
    const auto eig = oracle::eigh_desc(aat);
    SubspaceBasis best;
    best.d = d;
    best.m = m;
    best.vectors.assign(d * m, 0.0);
    best.eigenvalues.assign(d, 0.0);
    for (std::size_t q = 0; q < d; ++q)
        for (std::size_t r = 0; r < m; ++r) best.vec(q)[r] = eig.vectors(r, q);

    const EvScore score = expressed_variance(best, truth);
    CHECK(score.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(score.value <= 1.0 + 1e-9);
}

TEST_CASE("expressed_variance: direction orthogonal to the column space scores 0") {
    GroundTruth truth;
    truth.A = Matrix(3, 1);
    truth.A(0, 0) = 2.0;  // column space = span(e_0)
    SubspaceBasis w;
    w.d = 1;
    w.m = 3;
    w.vectors = {0.0, 1.0, 0.0};
    w.eigenvalues = {0.0};
    CHECK(expressed_variance(w, truth).value == doctest::Approx(0.0));
}

TEST_CASE("expressed_variance: zero mixing matrix is degenerate") {
    GroundTruth truth;
    truth.A = Matrix(3, 1);
    SubspaceBasis w;
    w.d = 1;
    w.m = 3;
    w.vectors = {1.0, 0.0, 0.0};
    w.eigenvalues = {0.0};
    CHECK_THROWS_AS(expressed_variance(w, truth), degenerate_error);
}

TEST_CASE("expressed_variance matches the dense eigendecomposition oracle") {
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 150; ++rep) {
        const std::size_t m = 6, d = 2;
        const GroundTruth truth = random_truth(rng, m, d);
        const SubspaceBasis basis = oracle::random_orthonormal(rng, d, m);

        const Eigen::MatrixXd A = oracle::to_eigen(truth.A);
        double num = 0.0;
        for (std::size_t q = 0; q < d; ++q) {
            Eigen::Map<const Eigen::VectorXd> w(basis.vec(q).data(), m);
            num += (A.transpose() * w).squaredNorm();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A * A.transpose());
        double den = 0.0;
        for (std::size_t q = 0; q < d; ++q) den += es.eigenvalues()(m - 1 - q);

        const EvScore got = expressed_variance(basis, truth);
        CHECK(got.value == doctest::Approx(num / den).epsilon(1e-9));
    }
}

TEST_CASE("expressed_variance is invariant under re-basis of the same subspace") {
    std::mt19937_64 rng(44);
    const std::size_t m = 7, d = 3;
    const GroundTruth truth = random_truth(rng, m, d);
    const SubspaceBasis basis = oracle::random_orthonormal(rng, d, m);

    const SubspaceBasis mix = oracle::random_orthonormal(rng, d, d);
    SubspaceBasis rotated = basis;
    std::fill(rotated.vectors.begin(), rotated.vectors.end(), 0.0);
    for (std::size_t q = 0; q < d; ++q)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t r = 0; r < m; ++r)
                rotated.vec(q)[r] += mix.vec(q)[i] * basis.vec(i)[r];

    const double a = expressed_variance(basis, truth).value;
    const double b = expressed_variance(rotated, truth).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("gaussian_tail_weight: endpoints exact, half-mass value") {
    CHECK(gaussian_tail_weight(0.0) == 0.0);
    CHECK(gaussian_tail_weight(1.0) == 1.0);
    // Quadrature oracle gives 0.0713259177...
    CHECK(gaussian_tail_weight(0.5) == doctest::Approx(0.0713259177).epsilon(1e-7));
    CHECK(std::abs(gaussian_tail_weight(0.5) - 0.0714) < 2e-4);
    CHECK_THROWS_AS(gaussian_tail_weight(-0.1), contract_error);
    CHECK_THROWS_AS(gaussian_tail_weight(1.1), contract_error);
}

TEST_CASE("gaussian_tail_weight closed form matches quadrature on a grid") {
    for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
        const double closed = gaussian_tail_weight(alpha);
        const double quad = oracle::tail_weight_quadrature(alpha);
        CHECK(std::abs(closed - quad) <= 1e-8);
    }
}

TEST_CASE("gaussian_tail_weight is monotone, continuous and bounded") {
    double prev = 0.0;
    for (double alpha = 0.0; alpha <= 1.0 + 1e-12; alpha += 1e-3) {
        const double a = std::min(alpha, 1.0);
        const double v = gaussian_tail_weight(a);
        CHECK(v >= prev - 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    for (double alpha = 0.1; alpha < 0.95; alpha += 0.1)
        CHECK(std::abs(gaussian_tail_weight(alpha + 1e-4) - gaussian_tail_weight(alpha)) < 1e-3);
}

TEST_CASE("probit agrees with the erfc-based CDF") {
    for (double p = 0.01; p < 1.0; p += 0.01) {
        const double x = probit(p);
        CHECK(oracle::std_normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic_bound: lambda*=0 attains 1 exactly") {
    const BoundResult r = asymptotic_bound(0.0, 0.5);
    CHECK(r.value == 1.0);
    CHECK(r.feasible);
}

TEST_CASE("asymptotic_bound: strictly positive below breakdown at matched trim") {
    // t_hat/t with t_hat = 0.5 n and t = (1 - lambda) n.
    const double lam = 0.45;
    const BoundResult r = asymptotic_bound(lam, 0.5 / (1.0 - lam));
    CHECK(r.value > 0.0);
    CHECK(r.feasible);
}

TEST_CASE("asymptotic_bound: infeasible trim ratio returns 0 with the flag down") {
    const BoundResult r = asymptotic_bound(0.45, 0.5);  // 0.5 - 0.45/0.55 < 0
    CHECK(r.value == 0.0);
    CHECK_FALSE(r.feasible);
}

TEST_CASE("asymptotic_bound: contract violations") {
    CHECK_THROWS_AS(asymptotic_bound(0.5, 0.8), contract_error);
    CHECK_THROWS_AS(asymptotic_bound(-0.1, 0.8), contract_error);
    CHECK_THROWS_AS(asymptotic_bound(0.2, 0.0), contract_error);
    CHECK_THROWS_AS(asymptotic_bound(0.2, 1.5), contract_error);
}

TEST_CASE("asymptotic_bound matches the 1e5-point grid oracle") {
    for (double lam : {0.1, 0.2, 0.3, 0.4}) {
        const BoundResult got = asymptotic_bound(lam, 0.8);
        const double want = oracle::bound_fine_grid(lam, 0.8, 100000, gaussian_tail_weight);
        CHECK(std::abs(got.value - want) <= 1e-4);
    }
}

TEST_CASE("asymptotic_bound is non-increasing in lambda*") {
    for (double t_ratio : {0.8, 1.0}) {
        double prev = 2.0;
        for (double lam = 0.0; lam < 0.5 - 1e-9; lam += 0.05) {
            const double v = asymptotic_bound(lam, t_ratio).value;
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("s0_bound: direct arithmetic") {
    CHECK(s0_bound(0.0, 100, 2.0) == 0);
    CHECK(s0_bound(0.4, 100, 2.0) == 60);
    CHECK(s0_bound(0.25, 200, 1.0) == 100);
    CHECK(s0_bound(0.3, 100, 2.0) == 45);
    CHECK_THROWS_AS(s0_bound(0.3, 100, 0.0), contract_error);
    CHECK_THROWS_AS(s0_bound(0.6, 100, 1.0), contract_error);
}
