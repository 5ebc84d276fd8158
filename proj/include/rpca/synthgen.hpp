#pragma once

#include <cstdint>

#include "rpca/types.hpp"

namespace rpca {

struct SynthConfig {
    std::size_t m = 100;
    std::size_t n = 100;
    std::size_t d = 1;
    double sigma = 5.0;   // leading singular value of the mixing matrix
    double mag = 10.0;    // outlier magnitude ratio
    double lambda = 0.0;  // outlier fraction, in [0, 0.5)
    std::uint64_t seed = 0;
};

struct SynthData {
    DataMatrix data;
    GroundTruth truth;
};

/// Largest singular value, computed as sqrt of the top eigenvalue of M^T M.
double largest_singular_value(const Matrix& M);

/// Contaminated dataset: t = ceil((1-lambda) n) authentic samples
/// z = A x + noise (x, noise standard Gaussian; A rescaled so its leading
/// singular value is sigma) plus n - t outliers u * r on one random line,
/// u uniform on [-sigma*mag, sigma*mag]. Rows are shuffled; the ground
/// truth carries A and the post-shuffle outlier indices. Fully determined
/// by the seed (mt19937_64, draw order documented in the implementation).
SynthData generate(const SynthConfig& config);

}  // namespace rpca
