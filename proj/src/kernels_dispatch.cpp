#include "rpca/kernels.hpp"

namespace rpca::kernels {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() noexcept {
#if defined(RPCA_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

namespace {

struct Table {
    Isa isa;
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    void (*scal)(double, double*, std::size_t) noexcept;
    void (*rank1_upper)(double*, const double*, double, std::size_t) noexcept;
};

Table resolve() noexcept {
#if defined(__x86_64__) && defined(RPCA_HAVE_AVX2_TU)
    if (avx2_supported())
        return {Isa::avx2, &avx2::dot, &avx2::axpy, &avx2::scal, &avx2::rank1_upper};
#endif
    return {Isa::scalar, &scalar::dot, &scalar::axpy, &scalar::scal, &scalar::rank1_upper};
}

const Table& table() noexcept {
    static const Table t = resolve();
    return t;
}

}  // namespace

Isa active_isa() noexcept { return table().isa; }

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::scalar: return "scalar";
    }
    return "unknown";
}

double dot(const double* a, const double* b, std::size_t len) noexcept {
    return table().dot(a, b, len);
}

void axpy(double c, const double* x, double* y, std::size_t len) noexcept {
    table().axpy(c, x, y, len);
}

void scal(double c, double* x, std::size_t len) noexcept { table().scal(c, x, len); }

void rank1_upper(double* s, const double* y, double c, std::size_t m) noexcept {
    table().rank1_upper(s, y, c, m);
}

}  // namespace rpca::kernels
