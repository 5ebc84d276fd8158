#pragma once

#include <cstddef>

// Data-parallel inner loops used by the linear-algebra layer. Every kernel
// has a scalar reference implementation and, on x86-64, an AVX2/FMA variant.
// The dispatched entry points below resolve the ISA once per process, so a
// given build always runs the same code path (results are reproducible
// within a build; scalar and AVX2 sums differ in rounding only).

namespace rpca::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa() noexcept;
const char* isa_name(Isa isa) noexcept;

/// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t len) noexcept;

/// y[i] += c * x[i]
void axpy(double c, const double* x, double* y, std::size_t len) noexcept;

/// x[i] *= c
void scal(double c, double* x, std::size_t len) noexcept;

/// Upper triangle (row-major, including diagonal) of S += c * y * y^T.
/// S is m x m; rows below the diagonal are left untouched.
void rank1_upper(double* s, const double* y, double c, std::size_t m) noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t len) noexcept;
void axpy(double c, const double* x, double* y, std::size_t len) noexcept;
void scal(double c, double* x, std::size_t len) noexcept;
void rank1_upper(double* s, const double* y, double c, std::size_t m) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t len) noexcept;
void axpy(double c, const double* x, double* y, std::size_t len) noexcept;
void scal(double c, double* x, std::size_t len) noexcept;
void rank1_upper(double* s, const double* y, double c, std::size_t m) noexcept;
}  // namespace avx2

bool avx2_supported() noexcept;
#endif

}  // namespace rpca::kernels
