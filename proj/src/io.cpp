#include "rpca/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rpca {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw io_error("malformed numeric field: '" + std::string(s) + "'");
    return v;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

void write_rows(std::ofstream& out, const double* a, std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (j) out << ',';
            out << format_double(a[i * cols + j]);
        }
        out << '\n';
    }
}

std::pair<std::vector<double>, std::size_t> read_rows(std::ifstream& in,
                                                      const std::filesystem::path& path) {
    std::vector<double> values;
    std::size_t cols = 0, rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (cols == 0) cols = fields.size();
        else if (fields.size() != cols)
            throw io_error("ragged rows in " + path.string());
        for (const auto& f : fields) values.push_back(parse_double(f));
        ++rows;
    }
    if (rows == 0) throw io_error("empty file: " + path.string());
    return {std::move(values), cols};
}

}  // namespace

void write_data_csv(const std::filesystem::path& path, const DataMatrix& data) {
    auto out = open_out(path);
    write_rows(out, data.values.data(), data.n, data.m);
    finish(out, path);
}

DataMatrix read_data_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    auto [values, cols] = read_rows(in, path);
    const std::size_t rows = values.size() / cols;
    return DataMatrix(rows, cols, std::move(values));
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& M) {
    auto out = open_out(path);
    write_rows(out, M.a.data(), M.rows, M.cols);
    finish(out, path);
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    auto [values, cols] = read_rows(in, path);
    Matrix M(values.size() / cols, cols);
    M.a = std::move(values);
    return M;
}

void write_indices(const std::filesystem::path& path, const std::vector<std::size_t>& idx) {
    auto out = open_out(path);
    for (std::size_t v : idx) out << v << '\n';
    finish(out, path);
}

std::vector<std::size_t> read_indices(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::size_t> idx;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t v = 0;
        const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc{}) throw io_error("malformed index in " + path.string());
        idx.push_back(v);
    }
    return idx;
}

namespace {
constexpr const char* kBenchHeader =
    "trial,algorithm,m,n,d,lambda,sigma,mag,t_hat,iteration,opt,ev,nonzero_weights,wall_ms,"
    "seed,termination_reason";
constexpr const char* kSweepHeader =
    "algorithm,lambda,m,n,d,sigma,mag,t_hat,trials,base_seed,mean_final_ev,std_final_ev,"
    "mean_iters_to_best,std_iters_to_best";
}  // namespace

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows) {
    auto out = open_out(path);
    out << kBenchHeader << '\n';
    for (const auto& r : rows) {
        out << r.trial << ',' << r.algorithm << ',' << r.m << ',' << r.n << ',' << r.d << ','
            << format_double(r.lambda) << ',' << format_double(r.sigma) << ','
            << format_double(r.mag) << ',' << r.t_hat << ',' << r.iteration << ','
            << format_double(r.opt) << ',' << (r.ev ? format_double(*r.ev) : std::string{})
            << ',' << r.nonzero_weights << ',' << format_double(r.wall_ms) << ',' << r.seed
            << ',' << r.termination_reason << '\n';
    }
    finish(out, path);
}

std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != kBenchHeader)
        throw io_error("missing or unexpected header in " + path.string());
    std::vector<BenchRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 16) throw io_error("bad field count in " + path.string());
        BenchRecord r;
        r.trial = std::stoull(f[0]);
        r.algorithm = f[1];
        r.m = std::stoull(f[2]);
        r.n = std::stoull(f[3]);
        r.d = std::stoull(f[4]);
        r.lambda = parse_double(f[5]);
        r.sigma = parse_double(f[6]);
        r.mag = parse_double(f[7]);
        r.t_hat = std::stoull(f[8]);
        r.iteration = std::stoull(f[9]);
        r.opt = parse_double(f[10]);
        if (!f[11].empty()) r.ev = parse_double(f[11]);
        r.nonzero_weights = std::stoull(f[12]);
        r.wall_ms = parse_double(f[13]);
        r.seed = std::stoull(f[14]);
        r.termination_reason = f[15];
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& rows) {
    auto out = open_out(path);
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << r.algorithm << ',' << format_double(r.lambda) << ',' << r.m << ',' << r.n << ','
            << r.d << ',' << format_double(r.sigma) << ',' << format_double(r.mag) << ','
            << r.t_hat << ',' << r.trials << ',' << r.base_seed << ','
            << format_double(r.mean_final_ev) << ',' << format_double(r.std_final_ev) << ','
            << format_double(r.mean_iters_to_best) << ','
            << format_double(r.std_iters_to_best) << '\n';
    }
    finish(out, path);
}

std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader)
        throw io_error("missing or unexpected header in " + path.string());
    std::vector<SweepRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 14) throw io_error("bad field count in " + path.string());
        SweepRecord r;
        r.algorithm = f[0];
        r.lambda = parse_double(f[1]);
        r.m = std::stoull(f[2]);
        r.n = std::stoull(f[3]);
        r.d = std::stoull(f[4]);
        r.sigma = parse_double(f[5]);
        r.mag = parse_double(f[6]);
        r.t_hat = std::stoull(f[7]);
        r.trials = std::stoull(f[8]);
        r.base_seed = std::stoull(f[9]);
        r.mean_final_ev = parse_double(f[10]);
        r.std_final_ev = parse_double(f[11]);
        r.mean_iters_to_best = parse_double(f[12]);
        r.std_iters_to_best = parse_double(f[13]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace rpca
