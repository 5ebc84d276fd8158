#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "rpca/io.hpp"
#include "rpca/synthgen.hpp"

using namespace rpca;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rpca_io_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(parse_double(format_double(1.0)) == 1.0);
    CHECK(parse_double(format_double(-0.3)) == -0.3);
    CHECK_THROWS_AS(parse_double("abc"), io_error);
    CHECK_THROWS_AS(parse_double("1.5x"), io_error);
}

TEST_CASE("data csv round-trip is exact") {
    TempDir tmp;
    SynthConfig config;
    config.m = 7;
    config.n = 11;
    config.lambda = 0.2;
    config.seed = 42;
    const SynthData synth = generate(config);

    const fs::path p = tmp.path / "data.csv";
    write_data_csv(p, synth.data);
    const DataMatrix back = read_data_csv(p);
    CHECK(back.n == synth.data.n);
    CHECK(back.m == synth.data.m);
    CHECK(back.values == synth.data.values);

    // Re-writing produces byte-identical output.
    const fs::path q = tmp.path / "data2.csv";
    write_data_csv(q, back);
    CHECK(slurp(p) == slurp(q));
}

TEST_CASE("matrix csv and index files round-trip") {
    TempDir tmp;
    Matrix M(4, 2);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (double& v : M.a) v = g(rng);
    const fs::path p = tmp.path / "truth_A.csv";
    write_matrix_csv(p, M);
    const Matrix back = read_matrix_csv(p);
    CHECK(back.rows == 4);
    CHECK(back.cols == 2);
    CHECK(back.a == M.a);

    const std::vector<std::size_t> idx{1, 5, 9};
    const fs::path ip = tmp.path / "outliers.txt";
    write_indices(ip, idx);
    CHECK(read_indices(ip) == idx);

    write_indices(tmp.path / "empty.txt", {});
    CHECK(read_indices(tmp.path / "empty.txt").empty());
}

TEST_CASE("bench csv: header, blank ev, and numeric round-trip") {
    TempDir tmp;
    std::vector<BenchRecord> rows;
    BenchRecord r;
    r.trial = 0;
    r.algorithm = "dhr";
    r.m = 10;
    r.n = 20;
    r.d = 1;
    r.lambda = 0.2;
    r.sigma = 5.0;
    r.mag = 10.0;
    r.t_hat = 16;
    r.iteration = 1;
    r.opt = 0.123456789012345678;
    r.ev = 0.98765432109876543;
    r.nonzero_weights = 19;
    r.wall_ms = 1.25;
    r.seed = 7;
    rows.push_back(r);
    r.iteration = 2;
    r.ev.reset();  // blank when no ground truth
    r.termination_reason = "plateau";
    rows.push_back(r);

    const fs::path p = tmp.path / "bench.csv";
    write_bench_csv(p, rows);

    const auto back = read_bench_csv(p);
    REQUIRE(back.size() == 2);
    CHECK(back[0].opt == rows[0].opt);
    CHECK(back[0].ev.has_value());
    CHECK(*back[0].ev == *rows[0].ev);
    CHECK_FALSE(back[1].ev.has_value());
    CHECK(back[1].termination_reason == "plateau");
    CHECK(back[0].termination_reason.empty());

    const std::string text = slurp(p);
    CHECK(text.find("trial,algorithm") == 0);
}

TEST_CASE("sweep csv round-trips") {
    TempDir tmp;
    std::vector<SweepRecord> rows;
    SweepRecord s;
    s.algorithm = "hr";
    s.lambda = 0.3;
    s.m = 100;
    s.n = 100;
    s.d = 1;
    s.sigma = 5.0;
    s.mag = 10.0;
    s.t_hat = 70;
    s.trials = 20;
    s.base_seed = 1;
    s.mean_final_ev = 0.81234567890123456;
    s.std_final_ev = 0.0123;
    s.mean_iters_to_best = 25.55;
    s.std_iters_to_best = 3.25;
    rows.push_back(s);
    const fs::path p = tmp.path / "sweep.csv";
    write_sweep_csv(p, rows);
    const auto back = read_sweep_csv(p);
    REQUIRE(back.size() == 1);
    CHECK(back[0].mean_final_ev == s.mean_final_ev);
    CHECK(back[0].algorithm == "hr");
    CHECK(back[0].t_hat == 70);
}

TEST_CASE("unwritable path raises io_error") {
    DataMatrix data(1, 1, {1.0});
    CHECK_THROWS_AS(write_data_csv("/nonexistent_dir_zz/data.csv", data), io_error);
    CHECK_THROWS_AS(read_data_csv("/nonexistent_dir_zz/data.csv"), io_error);
}
