#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rpca/types.hpp"

namespace rpca {

/// Shortest text form that parses back to exactly the same double
/// (std::to_chars, general format, 17 significant digits).
std::string format_double(double v);

/// Locale-independent parse; throws io_error on malformed input.
double parse_double(std::string_view s);

// Dataset files: plain decimal text, 17 significant digits, no header.
void write_data_csv(const std::filesystem::path& path, const DataMatrix& data);
DataMatrix read_data_csv(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& M);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// One 0-based index per line, ascending.
void write_indices(const std::filesystem::path& path, const std::vector<std::size_t>& idx);
std::vector<std::size_t> read_indices(const std::filesystem::path& path);

/// One row per (trial, iteration) of a benchmark run.
struct BenchRecord {
    std::size_t trial = 0;
    std::string algorithm;
    std::size_t m = 0, n = 0, d = 0;
    double lambda = 0.0, sigma = 0.0, mag = 0.0;
    std::size_t t_hat = 0;
    std::size_t iteration = 0;
    double opt = 0.0;
    std::optional<double> ev;  // empty when no ground truth
    std::size_t nonzero_weights = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    std::string termination_reason;  // final row of a trial only
};

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows);
std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& path);

/// Per-(algorithm, lambda) aggregate of a sweep.
struct SweepRecord {
    std::string algorithm;
    double lambda = 0.0;
    std::size_t m = 0, n = 0, d = 0;
    double sigma = 0.0, mag = 0.0;
    std::size_t t_hat = 0;
    std::size_t trials = 0;
    std::uint64_t base_seed = 0;
    double mean_final_ev = 0.0, std_final_ev = 0.0;
    double mean_iters_to_best = 0.0, std_iters_to_best = 0.0;
};

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& rows);
std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& path);

}  // namespace rpca
