#include "pla/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pla {

namespace {

constexpr int kExpectedRows = 270;
constexpr const char* kHeader =
    "idx,r,h,m,p,mdr_a,mdr_e,mdr_err,lat_a,lat_e,lat_err_pct,jit_a,jit_e,"
    "jit_err_pct";

[[noreturn]] void fail(const std::filesystem::path& path, int line,
                       const std::string& what) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": " << what;
    throw std::runtime_error(os.str());
}

double parse_field(const std::string& s, const std::filesystem::path& path,
                   int line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail(path, line, "not a number: '" + s + "'");
    }
    if (pos != s.size()) fail(path, line, "trailing junk in field: '" + s + "'");
    return v;
}

bool on_grid(double v, std::initializer_list<double> grid) {
    return std::any_of(grid.begin(), grid.end(),
                       [v](double g) { return std::abs(v - g) < 1e-9; });
}

}  // namespace

std::vector<ReferenceRow> load_reference(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++lineno;
    if (line != kHeader) fail(path, 1, "unexpected header");

    std::vector<ReferenceRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 14) fail(path, lineno, "expected 14 columns");

        ReferenceRow row;
        row.idx = static_cast<int>(parse_field(fields[0], path, lineno));
        row.r_ms = parse_field(fields[1], path, lineno);
        row.h_ms = parse_field(fields[2], path, lineno);
        row.m = parse_field(fields[3], path, lineno);
        row.p = parse_field(fields[4], path, lineno);
        row.mdr_a = parse_field(fields[5], path, lineno);
        row.mdr_e = parse_field(fields[6], path, lineno);
        row.mdr_err = parse_field(fields[7], path, lineno);
        row.lat_a = parse_field(fields[8], path, lineno);
        row.lat_e = parse_field(fields[9], path, lineno);
        row.lat_err_pct = parse_field(fields[10], path, lineno);
        row.jit_a = parse_field(fields[11], path, lineno);
        row.jit_e = parse_field(fields[12], path, lineno);
        row.jit_err_pct = parse_field(fields[13], path, lineno);

        if (row.idx != static_cast<int>(rows.size()) + 1)
            fail(path, lineno, "row index out of order");
        if (!on_grid(row.r_ms, {50, 100, 200}) ||
            !on_grid(row.h_ms, {50, 100, 200}) ||
            !on_grid(row.m, {0.008, 0.5, 1, 3, 5, 10}) ||
            !on_grid(row.p, {0.95, 0.9, 0.85, 0.8, 0.75}))
            fail(path, lineno, "parameters outside the reference grid");
        rows.push_back(row);
    }
    if (rows.size() != kExpectedRows) {
        std::ostringstream os;
        os << path.string() << ": expected " << kExpectedRows << " rows, got "
           << rows.size();
        throw std::runtime_error(os.str());
    }
    return rows;
}

ErrorSummary summarize_errors(std::span<const ReferenceRow> rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to summarize");
    const double n = static_cast<double>(rows.size());
    auto mean_std = [&](auto getter) {
        double sum = 0.0;
        for (const auto& r : rows) sum += getter(r);
        const double mean = sum / n;
        if (rows.size() == 1) return std::pair{mean, 0.0};
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = getter(r) - mean;
            ss += d * d;
        }
        return std::pair{mean, std::sqrt(ss / (n - 1.0))};
    };
    ErrorSummary s;
    std::tie(s.mdr_mean, s.mdr_std) =
        mean_std([](const ReferenceRow& r) { return r.mdr_err; });
    std::tie(s.lat_mean, s.lat_std) =
        mean_std([](const ReferenceRow& r) { return r.lat_err_pct; });
    std::tie(s.jit_mean, s.jit_std) =
        mean_std([](const ReferenceRow& r) { return r.jit_err_pct; });
    return s;
}

std::filesystem::path default_reference_path() {
    if (const char* env = std::getenv("PLA_DATA_DIR"))
        return std::filesystem::path(env) / "appendix_b.csv";
    const std::filesystem::path local = "data/appendix_b.csv";
    if (std::filesystem::exists(local)) return local;
#ifdef PLA_SOURCE_DATA_DIR
    return std::filesystem::path(PLA_SOURCE_DATA_DIR) / "appendix_b.csv";
#else
    return local;
#endif
}

}  // namespace pla
