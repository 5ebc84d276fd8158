#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rpca/kernels.hpp"

using namespace rpca;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t len, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    std::vector<double> v(len);
    for (double& x : v) x = g(rng);
    return v;
}

double rel_tol(double ref) { return 1e-13 * (std::abs(ref) + 1.0); }

}  // namespace

TEST_CASE("scalar dot matches a plain loop on small cases") {
    const double a[] = {1.0, 2.0, 3.0};
    const double b[] = {-1.0, 0.5, 2.0};
    CHECK(kernels::scalar::dot(a, b, 3) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(kernels::scalar::dot(a, b, 0) == 0.0);
}

TEST_CASE("dispatched kernels agree with the scalar reference") {
    std::mt19937_64 rng(7);
    for (std::size_t len : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7},
                            std::size_t{8}, std::size_t{19}, std::size_t{64}, std::size_t{129}}) {
        auto a = random_vec(rng, len), b = random_vec(rng, len);

        const double d_ref = kernels::scalar::dot(a.data(), b.data(), len);
        CHECK(kernels::dot(a.data(), b.data(), len) == doctest::Approx(d_ref).epsilon(1e-13));

        auto y1 = random_vec(rng, len);
        auto y2 = y1;
        kernels::scalar::axpy(0.37, a.data(), y1.data(), len);
        kernels::axpy(0.37, a.data(), y2.data(), len);
        for (std::size_t i = 0; i < len; ++i)
            CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));

        auto x1 = a, x2 = a;
        kernels::scalar::scal(-1.75, x1.data(), len);
        kernels::scal(-1.75, x2.data(), len);
        for (std::size_t i = 0; i < len; ++i) CHECK(x2[i] == x1[i]);
    }
}

#if defined(RPCA_HAVE_AVX2_TU)
TEST_CASE("avx2 kernels agree with scalar on randomized lengths") {
    if (!kernels::avx2_supported()) return;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> len_dist(1, 200);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t len = len_dist(rng);
        auto a = random_vec(rng, len, 3.0), b = random_vec(rng, len, 3.0);

        const double want = kernels::scalar::dot(a.data(), b.data(), len);
        const double got = kernels::avx2::dot(a.data(), b.data(), len);
        CHECK(std::abs(got - want) <= rel_tol(want) * len);

        auto y1 = random_vec(rng, len), y2 = y1;
        kernels::scalar::axpy(1.3, a.data(), y1.data(), len);
        kernels::avx2::axpy(1.3, a.data(), y2.data(), len);
        for (std::size_t i = 0; i < len; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13);
    }
}

TEST_CASE("avx2 rank1_upper equals scalar rank1_upper") {
    if (!kernels::avx2_supported()) return;
    std::mt19937_64 rng(13);
    for (std::size_t m : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{8},
                          std::size_t{17}, std::size_t{33}}) {
        auto y = random_vec(rng, m, 2.0);
        std::vector<double> s1(m * m, 0.0), s2(m * m, 0.0);
        kernels::scalar::rank1_upper(s1.data(), y.data(), 0.71, m);
        kernels::avx2::rank1_upper(s2.data(), y.data(), 0.71, m);
        for (std::size_t i = 0; i < m * m; ++i)
            CHECK(std::abs(s1[i] - s2[i]) <= 1e-13 * (std::abs(s1[i]) + 1.0));
    }
}
#endif

TEST_CASE("rank1_upper writes the upper triangle only") {
    const double y[] = {1.0, 2.0, 3.0};
    std::vector<double> s(9, 0.0);
    kernels::rank1_upper(s.data(), y, 2.0, 3);
    CHECK(s[0] == 2.0);   // (0,0) = 2*1*1
    CHECK(s[1] == 4.0);   // (0,1)
    CHECK(s[2] == 6.0);   // (0,2)
    CHECK(s[3] == 0.0);   // (1,0) untouched
    CHECK(s[4] == 8.0);   // (1,1)
    CHECK(s[5] == 12.0);  // (1,2)
    CHECK(s[6] == 0.0);
    CHECK(s[7] == 0.0);
    CHECK(s[8] == 18.0);  // (2,2)
}

TEST_CASE("active isa is resolved and stable") {
    const auto isa = kernels::active_isa();
    CHECK(kernels::isa_name(isa) != nullptr);
    CHECK(kernels::active_isa() == isa);
#if defined(RPCA_HAVE_AVX2_TU)
    if (kernels::avx2_supported()) CHECK(isa == kernels::Isa::avx2);
#else
    CHECK(isa == kernels::Isa::scalar);
#endif
}
