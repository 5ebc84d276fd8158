#include "rpca/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "rpca/kernels.hpp"

namespace rpca {

double Matrix::frobenius_norm() const {
    return std::sqrt(kernels::dot(a.data(), a.data(), a.size()));
}

DataMatrix::DataMatrix(std::size_t n_, std::size_t m_, std::vector<double> values_)
    : n(n_), m(m_), values(std::move(values_)) {
    if (n < 1 || m < 1) throw contract_error("DataMatrix: n and m must be >= 1");
    if (values.size() != n * m)
        throw contract_error("DataMatrix: value count does not match n*m");
    for (double v : values)
        if (!std::isfinite(v)) throw contract_error("DataMatrix: non-finite entry");
}

std::size_t WeightVector::nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(alphas.begin(), alphas.end(), [](double a) { return a != 0.0; }));
}

std::size_t ceil_count(double x) {
    if (x <= 0.0) return 0;
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)))
        return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(x));
}

Matrix weighted_second_moment(const DataMatrix& data, const WeightVector& weights) {
    if (weights.size() != data.n)
        throw contract_error("weighted_second_moment: weight count != n");
    if (weights.all_zero())
        throw degenerate_error("weighted_second_moment: all weights are zero");

    const std::size_t m = data.m;
    Matrix sigma(m, m);
    const double inv_n = 1.0 / static_cast<double>(data.n);
    for (std::size_t i = 0; i < data.n; ++i) {
        const double a = weights.alphas[i];
        if (a == 0.0) continue;
        kernels::rank1_upper(sigma.a.data(), data.row(i).data(), a * inv_n, m);
    }
    // Accumulation touched the upper triangle only; mirror it.
    for (std::size_t r = 1; r < m; ++r)
        for (std::size_t c = 0; c < r; ++c) sigma(r, c) = sigma(c, r);
    return sigma;
}

namespace {

// splitmix64: fixed, portable stream for deterministic start blocks.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double norm2(std::span<const double> v) {
    return std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
}

// Cyclic Jacobi on a dense symmetric matrix; returns all eigenpairs sorted
// by non-increasing eigenvalue. Quadratically convergent, used both for the
// small Rayleigh-Ritz systems and as the dense fallback.
struct EigenDecomposition {
    std::vector<double> values;   // sorted non-increasing
    std::vector<double> vectors;  // column j (stride = size) matches values[j]
    std::size_t size = 0;
};

EigenDecomposition jacobi_eigh(Matrix A) {
    const std::size_t m = A.rows;
    std::vector<double> V(m * m, 0.0);  // column-major accumulator of rotations
    for (std::size_t i = 0; i < m; ++i) V[i * m + i] = 1.0;

    double off = 0.0;
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q) off += A(p, q) * A(p, q);
    const double scale = A.frobenius_norm() + 1.0;
    const double tol = 1e-30 * scale * scale;

    for (int sweep = 0; sweep < 64 && off > tol; ++sweep) {
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double app = A(p, p), aqq = A(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double vkp = V[p * m + k], vkq = V[q * m + k];
                    V[p * m + k] = c * vkp - s * vkq;
                    V[q * m + k] = s * vkp + c * vkq;
                }
            }
        }
        off = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) off += A(p, q) * A(p, q);
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return A(a, a) > A(b, b); });

    EigenDecomposition out;
    out.size = m;
    out.values.resize(m);
    out.vectors.resize(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        out.values[j] = A(order[j], order[j]);
        for (std::size_t k = 0; k < m; ++k) out.vectors[j * m + k] = V[order[j] * m + k];
    }
    return out;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
// collapse are replaced by deterministic fresh vectors so the block keeps
// full rank.
void orthonormalize(std::vector<double>& block, std::size_t m, std::size_t b,
                    std::uint64_t& seed_state) {
    for (std::size_t j = 0; j < b; ++j) {
        double* vj = block.data() + j * m;
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                const double* vk = block.data() + k * m;
                const double c = kernels::dot(vk, vj, m);
                kernels::axpy(-c, vk, vj, m);
            }
        double nj = norm2({vj, m});
        while (nj < 1e-8) {
            for (std::size_t r = 0; r < m; ++r)
                vj[r] = static_cast<double>(splitmix64(seed_state) >> 11) * 0x1.0p-53 - 0.5;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t k = 0; k < j; ++k) {
                    const double* vk = block.data() + k * m;
                    const double c = kernels::dot(vk, vj, m);
                    kernels::axpy(-c, vk, vj, m);
                }
            nj = norm2({vj, m});
        }
        kernels::scal(1.0 / nj, vj, m);
    }
}

SubspaceBasis take_top_d(const EigenDecomposition& full, std::size_t m, std::size_t d) {
    SubspaceBasis basis;
    basis.d = d;
    basis.m = m;
    basis.vectors.resize(d * m);
    basis.eigenvalues.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        basis.eigenvalues[j] = std::max(full.values[j], 0.0);
        std::copy_n(full.vectors.data() + j * m, m, basis.vec(j).begin());
    }
    return basis;
}

}  // namespace

SubspaceBasis top_d_eigen(const MatVec& apply, std::size_t m, std::size_t d, double scale) {
    if (d > m) throw contract_error("top_d_eigen: d > m");
    if (d == 0) throw contract_error("top_d_eigen: d must be >= 1");

    // Block subspace iteration with Rayleigh-Ritz extraction. The block is
    // padded past d so interior eigen-gaps do not throttle convergence.
    const std::size_t b = std::min(m, d + 4);
    const double res_tol = 1e-9 * (scale + 1.0);
    const std::size_t max_rounds = 600;

    std::uint64_t seed_state = 0x5eed0f9e1d2c3b4aull;
    std::vector<double> V(b * m);
    for (double& x : V) x = static_cast<double>(splitmix64(seed_state) >> 11) * 0x1.0p-53 - 0.5;
    orthonormalize(V, m, b, seed_state);

    std::vector<double> Z(b * m), ritz(b * m), ritz_z(b * m);
    Matrix small(b, b);

    for (std::size_t round = 0; round < max_rounds; ++round) {
        for (std::size_t j = 0; j < b; ++j)
            apply({V.data() + j * m, m}, {Z.data() + j * m, m});

        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i; j < b; ++j) {
                const double v = kernels::dot(V.data() + i * m, Z.data() + j * m, m);
                small(i, j) = v;
                small(j, i) = v;
            }
        const EigenDecomposition ritz_sys = jacobi_eigh(small);

        // Ritz vectors and their images: ritz_j = sum_i U(i,j) V_i.
        std::fill(ritz.begin(), ritz.end(), 0.0);
        std::fill(ritz_z.begin(), ritz_z.end(), 0.0);
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t i = 0; i < b; ++i) {
                const double u = ritz_sys.vectors[j * b + i];
                kernels::axpy(u, V.data() + i * m, ritz.data() + j * m, m);
                kernels::axpy(u, Z.data() + i * m, ritz_z.data() + j * m, m);
            }

        bool converged = true;
        for (std::size_t j = 0; j < d && converged; ++j) {
            double res2 = 0.0;
            const double theta = ritz_sys.values[j];
            const double* rv = ritz.data() + j * m;
            const double* rz = ritz_z.data() + j * m;
            for (std::size_t r = 0; r < m; ++r) {
                const double diff = rz[r] - theta * rv[r];
                res2 += diff * diff;
            }
            if (res2 > res_tol * res_tol) converged = false;
        }
        if (converged) {
            SubspaceBasis basis;
            basis.d = d;
            basis.m = m;
            basis.vectors.resize(d * m);
            basis.eigenvalues.resize(d);
            for (std::size_t j = 0; j < d; ++j) {
                basis.eigenvalues[j] = std::max(ritz_sys.values[j], 0.0);
                std::copy_n(ritz.data() + j * m, m, basis.vec(j).begin());
            }
            return basis;
        }

        // Next subspace: orthonormalized images of the Ritz vectors.
        std::swap(V, ritz_z);
        orthonormalize(V, m, b, seed_state);
    }

    // Gap-free worst case: materialize the operator and solve densely.
    Matrix S(m, m);
    std::vector<double> e(m, 0.0), col(m);
    for (std::size_t j = 0; j < m; ++j) {
        e[j] = 1.0;
        apply(e, col);
        e[j] = 0.0;
        for (std::size_t r = 0; r < m; ++r) S(r, j) = col[r];
    }
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r + 1; c < m; ++c) {
            const double v = 0.5 * (S(r, c) + S(c, r));
            S(r, c) = v;
            S(c, r) = v;
        }
    return take_top_d(jacobi_eigh(std::move(S)), m, d);
}

SubspaceBasis top_d_eigen(const Matrix& sigma, std::size_t d) {
    if (sigma.rows != sigma.cols) throw contract_error("top_d_eigen: matrix not square");
    const std::size_t m = sigma.rows;

    double max_abs = 0.0, max_asym = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r; c < m; ++c) {
            max_abs = std::max(max_abs, std::abs(sigma(r, c)));
            max_asym = std::max(max_asym, std::abs(sigma(r, c) - sigma(c, r)));
        }
    if (max_asym > 1e-8 * (max_abs + 1.0))
        throw contract_error("top_d_eigen: matrix not symmetric within tolerance");

    const MatVec apply = [&sigma, m](std::span<const double> x, std::span<double> y) {
        for (std::size_t r = 0; r < m; ++r)
            y[r] = kernels::dot(sigma.a.data() + r * m, x.data(), m);
    };
    return top_d_eigen(apply, m, d, sigma.frobenius_norm());
}

}  // namespace rpca
