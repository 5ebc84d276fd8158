#include "rpca/kernels.hpp"

namespace rpca::kernels::scalar {

double dot(const double* a, const double* b, std::size_t len) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double c, const double* x, double* y, std::size_t len) noexcept {
    for (std::size_t i = 0; i < len; ++i) y[i] += c * x[i];
}

void scal(double c, double* x, std::size_t len) noexcept {
    for (std::size_t i = 0; i < len; ++i) x[i] *= c;
}

void rank1_upper(double* s, const double* y, double c, std::size_t m) noexcept {
    for (std::size_t r = 0; r < m; ++r) {
        const double cr = c * y[r];
        double* row = s + r * m;
        for (std::size_t j = r; j < m; ++j) row[j] += cr * y[j];
    }
}

}  // namespace rpca::kernels::scalar
