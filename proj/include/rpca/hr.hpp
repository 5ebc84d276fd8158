#pragma once

#include <cstdint>

#include "rpca/dhr.hpp"

namespace rpca {

struct HrConfig {
    std::size_t d = 1;
    std::size_t t_hat = 0;                  // required
    std::size_t max_removals = kDefault;    // default: n - t_hat
    std::uint64_t seed = 0;

    static constexpr std::size_t kDefault = static_cast<std::size_t>(-1);
};

/// Index sampled from the categorical distribution with the given masses,
/// via inverse CDF on a single uniform draw u in [0,1). Throws
/// degenerate_error when the total mass is not positive.
std::size_t sample_categorical(std::span<const double> mass, double u);

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
double canonical_uniform(std::uint64_t bits);

/// The randomized baseline: identical skeleton, but each iteration removes
/// one active point sampled with probability proportional to its variance
/// along the current candidate directions. The covariance stays normalized
/// by the original n, and candidates are scored by rve_sum on the original
/// data, so Opt values are comparable with run_dhr.
DhrResult run_hr(const DataMatrix& data, const HrConfig& config,
                 const GroundTruth* truth = nullptr);

}  // namespace rpca
