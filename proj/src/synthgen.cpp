#include "rpca/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rpca/kernels.hpp"
#include "rpca/numerics.hpp"

namespace rpca {

double largest_singular_value(const Matrix& M) {
    double norm2 = 0.0;
    for (double v : M.a) norm2 += v * v;
    if (norm2 == 0.0) throw contract_error("largest_singular_value: zero matrix");

    const std::size_t k = std::min(M.rows, M.cols);
    Matrix gram(k, k);
    const bool use_cols = M.cols <= M.rows;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            if (use_cols) {
                for (std::size_t r = 0; r < M.rows; ++r) s += M(r, i) * M(r, j);
            } else {
                s = kernels::dot(M.row(i).data(), M.row(j).data(), M.cols);
            }
            gram(i, j) = s;
            gram(j, i) = s;
        }
    const SubspaceBasis eig = top_d_eigen(gram, 1);
    return std::sqrt(std::max(eig.eigenvalues[0], 0.0));
}

namespace {

// Unbiased bounded draw for the Fisher-Yates shuffle; keeps the permutation
// identical across standard library implementations.
std::size_t bounded_draw(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

}  // namespace

SynthData generate(const SynthConfig& config) {
    if (config.lambda < 0.0 || config.lambda >= 0.5)
        throw contract_error("generate: lambda outside [0, 0.5)");
    if (config.sigma <= 0.0) throw contract_error("generate: sigma must be positive");
    if (config.mag <= 0.0) throw contract_error("generate: mag must be positive");
    if (config.d > config.m) throw contract_error("generate: d > m");
    if (config.n < 1 || config.m < 1) throw contract_error("generate: n, m must be >= 1");

    const std::size_t m = config.m, n = config.n, d = config.d;
    const std::size_t t = ceil_count((1.0 - config.lambda) * static_cast<double>(n));
    const std::size_t n_out = n - t;

    // Draw order: A entries (row-major), outlier line direction, signals,
    // noise, outlier magnitudes, shuffle permutation.
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix A(m, d);
    for (double& v : A.a) v = gauss(rng);
    const double top_sv = largest_singular_value(A);
    kernels::scal(config.sigma / top_sv, A.a.data(), A.a.size());

    std::vector<double> line(m);
    for (double& v : line) v = gauss(rng);
    const double line_norm = std::sqrt(kernels::dot(line.data(), line.data(), m));
    kernels::scal(1.0 / line_norm, line.data(), m);

    std::vector<double> rows(n * m, 0.0);
    for (std::size_t i = 0; i < t; ++i) {
        std::vector<double> x(d);
        for (double& v : x) v = gauss(rng);
        double* row = rows.data() + i * m;
        for (std::size_t r = 0; r < m; ++r)
            row[r] = kernels::dot(A.a.data() + r * d, x.data(), d);
    }
    for (std::size_t i = 0; i < t; ++i) {
        double* row = rows.data() + i * m;
        for (std::size_t r = 0; r < m; ++r) row[r] += gauss(rng);
    }
    const double bound = config.sigma * config.mag;
    std::uniform_real_distribution<double> unif(-bound, bound);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double u = unif(rng);
        double* row = rows.data() + (t + k) * m;
        for (std::size_t r = 0; r < m; ++r) row[r] = u * line[r];
    }

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[bounded_draw(rng, i)]);

    std::vector<double> shuffled(n * m);
    std::vector<std::size_t> outlier_indices;
    for (std::size_t dst = 0; dst < n; ++dst) {
        const std::size_t src = perm[dst];
        std::copy_n(rows.data() + src * m, m, shuffled.data() + dst * m);
        if (src >= t) outlier_indices.push_back(dst);
    }
    std::sort(outlier_indices.begin(), outlier_indices.end());

    SynthData out;
    out.data = DataMatrix(n, m, std::move(shuffled));
    out.truth.A = std::move(A);
    out.truth.outlier_indices = std::move(outlier_indices);
    return out;
}

}  // namespace rpca
