// Command-line benchmark harness: dataset synthesis, single runs, lambda
// sweeps with trial averaging, and evaluation of the asymptotic bound.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rpca/dhr.hpp"
#include "rpca/hr.hpp"
#include "rpca/io.hpp"
#include "rpca/kernelized.hpp"
#include "rpca/numerics.hpp"
#include "rpca/synthgen.hpp"

namespace fs = std::filesystem;
using namespace rpca;

namespace {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats mean_std(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

std::size_t default_t_hat(std::size_t n, std::optional<double> lambda) {
    if (lambda.has_value()) return ceil_count((1.0 - *lambda) * static_cast<double>(n));
    return ceil_count(0.5 * static_cast<double>(n));
}

struct AlgoParams {
    std::string algorithm = "dhr";
    std::size_t d = 1;
    std::size_t t_hat = 0;
    std::size_t max_iters = 0;
    std::size_t patience = 2;
    std::string kernel = "linear";
    double bandwidth = 1.0;
    int degree = 2;
    double offset = 1.0;
};

KernelSpec make_kernel_spec(const AlgoParams& p) {
    KernelSpec spec;
    if (p.kernel == "linear") spec.kind = KernelSpec::Kind::linear;
    else if (p.kernel == "gaussian") spec.kind = KernelSpec::Kind::gaussian;
    else if (p.kernel == "polynomial") spec.kind = KernelSpec::Kind::polynomial;
    else throw contract_error("unknown kernel: " + p.kernel);
    spec.bandwidth = p.bandwidth;
    spec.degree = p.degree;
    spec.offset = p.offset;
    return spec;
}

struct RunOutcome {
    RunTrace trace;
    double best_opt = 0.0;
    std::size_t iters_to_best = 0;
    StopReason reason = StopReason::max_iters;
    std::optional<double> final_ev;
};

RunOutcome run_algorithm(const AlgoParams& p, const DataMatrix& data, const GroundTruth* truth,
                         std::uint64_t seed) {
    RunOutcome out;
    if (p.algorithm == "dhr" || p.algorithm == "kernel-dhr") {
        DhrConfig config;
        config.d = p.d;
        config.t_hat = p.t_hat;
        config.max_iters = p.max_iters;
        config.patience = p.patience;
        if (p.algorithm == "dhr") {
            DhrResult r = run_dhr(data, config, truth);
            out.trace = std::move(r.trace);
            out.best_opt = r.best_opt;
            out.iters_to_best = r.iters_to_best;
            out.reason = r.reason;
            if (truth != nullptr) out.final_ev = expressed_variance(r.best_basis, *truth).value;
        } else {
            KernelDhrResult r = run_kernel_dhr(data, make_kernel_spec(p), config, truth);
            out.trace = std::move(r.trace);
            out.best_opt = r.best_opt;
            out.iters_to_best = r.iters_to_best;
            out.reason = r.reason;
            if (!out.trace.rows.empty() && !std::isnan(out.trace.rows.back().ev_best))
                out.final_ev = out.trace.rows.back().ev_best;
        }
    } else if (p.algorithm == "hr") {
        HrConfig config;
        config.d = p.d;
        config.t_hat = p.t_hat;
        config.seed = seed;
        DhrResult r = run_hr(data, config, truth);
        out.trace = std::move(r.trace);
        out.best_opt = r.best_opt;
        out.iters_to_best = r.iters_to_best;
        out.reason = r.reason;
        if (truth != nullptr) out.final_ev = expressed_variance(r.best_basis, *truth).value;
    } else if (p.algorithm == "pca") {
        const auto t0 = std::chrono::steady_clock::now();
        const Matrix sigma = weighted_second_moment(data, WeightVector::ones(data.n));
        const SubspaceBasis basis = top_d_eigen(sigma, p.d);
        const double opt = rve_sum(data, basis, p.t_hat);
        TraceRow row;
        row.iter = 1;
        row.opt = opt;
        row.candidate_opt = opt;
        row.nonzero_weights = data.n;
        if (truth != nullptr) {
            row.ev_candidate = expressed_variance(basis, *truth).value;
            row.ev_best = row.ev_candidate;
            out.final_ev = row.ev_candidate;
        }
        row.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        out.trace.rows.push_back(row);
        out.best_opt = opt;
        out.iters_to_best = 1;
        out.reason = StopReason::max_iters;
    } else {
        throw contract_error("unknown algorithm: " + p.algorithm);
    }
    return out;
}

struct DatasetSpec {
    std::string data_path;
    std::string truth_path;
    SynthConfig synth;
    bool has_lambda = false;
    bool from_files = false;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int cmd_synth(const SynthConfig& config, const std::string& out_dir) {
    const SynthData synth = generate(config);
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_data_csv(dir / "data.csv", synth.data);
    write_matrix_csv(dir / "truth_A.csv", synth.truth.A);
    write_indices(dir / "outliers.txt", synth.truth.outlier_indices);
    std::printf("synth wrote %s (%zux%zu), %s (%zux%zu), %s (%zu outliers)\n",
                (dir / "data.csv").c_str(), synth.data.n, synth.data.m,
                (dir / "truth_A.csv").c_str(), synth.truth.A.rows, synth.truth.A.cols,
                (dir / "outliers.txt").c_str(), synth.truth.outlier_indices.size());
    return 0;
}

int cmd_run(const DatasetSpec& ds, const AlgoParams& params, std::size_t trials,
            std::uint64_t base_seed, const std::string& out_path) {
    std::vector<BenchRecord> records;
    std::vector<double> final_evs, iters_to_best, wall_totals;
    bool have_ev = true;

    DataMatrix file_data;
    GroundTruth file_truth;
    bool have_file_truth = false;
    if (ds.from_files) {
        file_data = read_data_csv(ds.data_path);
        if (!ds.truth_path.empty()) {
            file_truth.A = read_matrix_csv(ds.truth_path);
            have_file_truth = true;
        }
    }

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = base_seed + trial;
        const DataMatrix* data = nullptr;
        const GroundTruth* truth = nullptr;
        SynthData synth;
        if (ds.from_files) {
            data = &file_data;
            truth = have_file_truth ? &file_truth : nullptr;
        } else {
            SynthConfig sc = ds.synth;
            sc.seed = seed;
            synth = generate(sc);
            data = &synth.data;
            truth = &synth.truth;
        }

        AlgoParams p = params;
        if (p.t_hat == 0)
            p.t_hat = default_t_hat(data->n, ds.has_lambda
                                                 ? std::optional<double>(ds.synth.lambda)
                                                 : std::nullopt);

        const RunOutcome outcome = run_algorithm(p, *data, truth, seed);

        double wall = 0.0;
        for (std::size_t i = 0; i < outcome.trace.rows.size(); ++i) {
            const TraceRow& row = outcome.trace.rows[i];
            BenchRecord rec;
            rec.trial = trial;
            rec.algorithm = params.algorithm;
            rec.m = data->m;
            rec.n = data->n;
            rec.d = p.d;
            rec.lambda = ds.from_files ? kNaN : ds.synth.lambda;
            rec.sigma = ds.from_files ? kNaN : ds.synth.sigma;
            rec.mag = ds.from_files ? kNaN : ds.synth.mag;
            rec.t_hat = p.t_hat;
            rec.iteration = row.iter;
            rec.opt = row.opt;
            if (!std::isnan(row.ev_candidate)) rec.ev = row.ev_candidate;
            rec.nonzero_weights = row.nonzero_weights;
            rec.wall_ms = row.wall_ms;
            rec.seed = seed;
            if (i + 1 == outcome.trace.rows.size())
                rec.termination_reason = stop_reason_name(outcome.reason);
            records.push_back(std::move(rec));
            wall += row.wall_ms;
        }

        if (outcome.final_ev.has_value()) final_evs.push_back(*outcome.final_ev);
        else have_ev = false;
        iters_to_best.push_back(static_cast<double>(outcome.iters_to_best));
        wall_totals.push_back(wall);
    }

    if (!out_path.empty()) write_bench_csv(out_path, records);

    const Stats it = mean_std(iters_to_best);
    const Stats wt = mean_std(wall_totals);
    if (have_ev && !final_evs.empty()) {
        const Stats ev = mean_std(final_evs);
        std::printf(
            "run algorithm=%s trials=%zu mean_final_ev=%.6f std_final_ev=%.6f "
            "mean_iters_to_best=%.3f std_iters_to_best=%.3f mean_wall_ms=%.3f std_wall_ms=%.3f\n",
            params.algorithm.c_str(), trials, ev.mean, ev.stddev, it.mean, it.stddev, wt.mean,
            wt.stddev);
    } else {
        std::printf(
            "run algorithm=%s trials=%zu mean_final_ev=- std_final_ev=- "
            "mean_iters_to_best=%.3f std_iters_to_best=%.3f mean_wall_ms=%.3f std_wall_ms=%.3f\n",
            params.algorithm.c_str(), trials, it.mean, it.stddev, wt.mean, wt.stddev);
    }
    return 0;
}

int cmd_sweep(const SynthConfig& base, const std::vector<double>& lambdas,
              const AlgoParams& params, std::size_t trials, std::uint64_t base_seed,
              const std::string& out_path) {
    std::vector<SweepRecord> rows;
    for (double lambda : lambdas) {
        if (lambda < 0.0 || lambda >= 0.5)
            throw contract_error("sweep: lambda outside [0, 0.5)");
        for (const char* algo : {"dhr", "hr"}) {
            std::vector<double> evs, itbs;
            const std::size_t t_hat =
                params.t_hat != 0 ? params.t_hat : default_t_hat(base.n, lambda);
            for (std::size_t trial = 0; trial < trials; ++trial) {
                SynthConfig sc = base;
                sc.lambda = lambda;
                sc.seed = base_seed + trial;
                const SynthData synth = generate(sc);
                AlgoParams p = params;
                p.algorithm = algo;
                p.t_hat = t_hat;
                const RunOutcome outcome = run_algorithm(p, synth.data, &synth.truth, sc.seed);
                if (outcome.final_ev.has_value()) evs.push_back(*outcome.final_ev);
                itbs.push_back(static_cast<double>(outcome.iters_to_best));
            }
            const Stats ev = mean_std(evs);
            const Stats it = mean_std(itbs);
            SweepRecord rec;
            rec.algorithm = algo;
            rec.lambda = lambda;
            rec.m = base.m;
            rec.n = base.n;
            rec.d = params.d;
            rec.sigma = base.sigma;
            rec.mag = base.mag;
            rec.t_hat = t_hat;
            rec.trials = trials;
            rec.base_seed = base_seed;
            rec.mean_final_ev = ev.mean;
            rec.std_final_ev = ev.stddev;
            rec.mean_iters_to_best = it.mean;
            rec.std_iters_to_best = it.stddev;
            rows.push_back(std::move(rec));
            std::printf(
                "sweep lambda=%.4f algorithm=%s mean_final_ev=%.6f std=%.6f "
                "mean_iters_to_best=%.3f std=%.3f\n",
                lambda, algo, ev.mean, ev.stddev, it.mean, it.stddev);
        }
    }
    if (!out_path.empty()) write_sweep_csv(out_path, rows);
    return 0;
}

int cmd_bound(double lambda_star, double t_ratio) {
    if (lambda_star < 0.0 || lambda_star >= 0.5)
        throw contract_error("bound: lambda outside [0, 0.5)");
    if (t_ratio <= 0.0 || t_ratio > 1.0)
        throw contract_error("bound: t-ratio outside (0, 1]");
    // The flag is the trim fraction t_hat/n; the bound formula consumes
    // t_hat/t with t = (1 - lambda) n.
    const double t_over_t = std::min(1.0, t_ratio / (1.0 - lambda_star));
    const BoundResult r = asymptotic_bound(lambda_star, t_over_t);
    std::printf("bound %s\n", format_double(r.value).c_str());
    if (r.feasible && r.argmax_kappa > 0.0)
        std::printf("argmax_kappa %s\n", format_double(r.argmax_kappa).c_str());
    else if (r.feasible)
        std::printf("argmax_kappa 0 (kappa -> 0 limit)\n");
    else
        std::printf("argmax_kappa none (no feasible kappa on the grid)\n");
    std::printf("kappa_grid %zu log-spaced points on [%g, %g]\n", kBoundKappaPoints,
                kBoundKappaMin, kBoundKappaMax);
    std::printf("t_hat_over_t %s\n", format_double(t_over_t).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust PCA for contaminated high-dimensional data"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "Generate a contaminated dataset");
    SynthConfig sc;
    std::string out_dir;
    synth->add_option("--m", sc.m, "ambient dimension")->required();
    synth->add_option("--n", sc.n, "observation count")->required();
    synth->add_option("--d", sc.d, "signal dimension");
    synth->add_option("--sigma", sc.sigma, "leading singular value of A");
    synth->add_option("--mag", sc.mag, "outlier magnitude ratio");
    synth->add_option("--lambda", sc.lambda, "outlier fraction in [0, 0.5)");
    synth->add_option("--seed", sc.seed, "rng seed");
    synth->add_option("--out", out_dir, "output directory")->required();

    auto* run = app.add_subcommand("run", "Run one algorithm over seeded trials");
    DatasetSpec ds;
    AlgoParams params;
    std::size_t trials = 1;
    std::uint64_t base_seed = 0;
    std::string run_out;
    std::vector<double> run_lambda;
    run->add_option("--algorithm", params.algorithm, "dhr | hr | pca | kernel-dhr")->required();
    run->add_option("--data", ds.data_path, "existing data.csv (skips synthesis)");
    run->add_option("--truth", ds.truth_path, "truth_A.csv for E.V. scoring");
    run->add_option("--m", ds.synth.m, "ambient dimension");
    run->add_option("--n", ds.synth.n, "observation count");
    run->add_option("--d", params.d, "subspace dimension");
    run->add_option("--lambda", run_lambda, "outlier fraction")->expected(0, 1);
    run->add_option("--sigma", ds.synth.sigma, "signal scale");
    run->add_option("--mag", ds.synth.mag, "outlier magnitude ratio");
    run->add_option("--seed", base_seed, "base seed; trial i uses base+i");
    run->add_option("--trials", trials, "trial count");
    run->add_option("--t-hat", params.t_hat, "RVE trim count (default from lambda)");
    run->add_option("--max-iters", params.max_iters, "iteration cap (0 = derived)");
    run->add_option("--patience", params.patience, "plateau window");
    run->add_option("--kernel", params.kernel, "linear | gaussian | polynomial");
    run->add_option("--bandwidth", params.bandwidth, "gaussian kernel bandwidth");
    run->add_option("--degree", params.degree, "polynomial kernel degree");
    run->add_option("--out", run_out, "bench CSV path");

    auto* sweep = app.add_subcommand("sweep", "Sweep lambda values for dhr and hr");
    SynthConfig sw;
    AlgoParams sweep_params;
    std::size_t sweep_trials = 20;
    std::uint64_t sweep_seed = 0;
    std::string sweep_out;
    std::vector<double> sweep_lambdas;
    sweep->add_option("--lambda", sweep_lambdas, "lambda grid values")
        ->required()
        ->expected(-1);
    sweep->add_option("--m", sw.m, "ambient dimension");
    sweep->add_option("--n", sw.n, "observation count");
    sweep->add_option("--d", sweep_params.d, "subspace dimension");
    sweep->add_option("--sigma", sw.sigma, "signal scale");
    sweep->add_option("--mag", sw.mag, "outlier magnitude ratio");
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--trials", sweep_trials, "trials per (lambda, algorithm)");
    sweep->add_option("--t-hat", sweep_params.t_hat, "RVE trim count override");
    sweep->add_option("--max-iters", sweep_params.max_iters, "iteration cap (0 = derived)");
    sweep->add_option("--patience", sweep_params.patience, "plateau window");
    sweep->add_option("--out", sweep_out, "sweep CSV path");

    auto* bound = app.add_subcommand("bound", "Evaluate the asymptotic E.V. lower bound");
    double lambda_star = 0.0;
    double t_ratio = 0.5;
    bound->add_option("--lambda", lambda_star, "asymptotic outlier fraction")->required();
    bound->add_option("--t-ratio", t_ratio, "trim fraction t_hat/n (default 0.5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(sc, out_dir);
        if (run->parsed()) {
            ds.from_files = !ds.data_path.empty();
            ds.has_lambda = !run_lambda.empty();
            if (ds.has_lambda) ds.synth.lambda = run_lambda.front();
            if (!ds.from_files && !ds.truth_path.empty())
                throw contract_error("--truth requires --data");
            return cmd_run(ds, params, trials, base_seed, run_out);
        }
        if (sweep->parsed())
            return cmd_sweep(sw, sweep_lambdas, sweep_params, sweep_trials, sweep_seed,
                             sweep_out);
        if (bound->parsed()) return cmd_bound(lambda_star, t_ratio);
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const contract_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const degenerate_error& e) {
        std::fprintf(stderr, "degenerate input: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
