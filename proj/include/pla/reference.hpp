#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace pla {

// One row of the bundled 270-scenario reference table: parameters, the
// recorded analytical and experimental triples, and the recorded errors
// (absolute points for MDR, percent for latency and jitter).
struct ReferenceRow {
    int idx = 0;
    double r_ms = 0, h_ms = 0, m = 0, p = 0;
    double mdr_a = 0, mdr_e = 0, mdr_err = 0;
    double lat_a = 0, lat_e = 0, lat_err_pct = 0;
    double jit_a = 0, jit_e = 0, jit_err_pct = 0;
};

struct ErrorSummary {
    double mdr_mean = 0, mdr_std = 0;
    double lat_mean = 0, lat_std = 0;
    double jit_mean = 0, jit_std = 0;
};

// Parses the 14-column CSV. Throws std::runtime_error with the offending
// line number on malformed input and when the row count is not 270.
std::vector<ReferenceRow> load_reference(const std::filesystem::path& path);

// Mean and sample standard deviation of the stored per-row error columns.
ErrorSummary summarize_errors(std::span<const ReferenceRow> rows);

// PLA_DATA_DIR override, then ./data, then the build-time source location.
std::filesystem::path default_reference_path();

}  // namespace pla
