#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "powerscope/types.hpp"

namespace powerscope {

// Canonical measurement CSV layout (1-based columns):
//   1 benchmark, 2 freq_hz, 3 volt_v, 4 temp_c, 5 power_w, 6 cycles,
//   then one column per counter.
// Arbitrary layouts are remapped onto this model via the column indices
// taken by load_measurements; the metadata columns are located by header
// name, power and counters by index.
inline constexpr std::size_t kCanonicalPowerColumn = 5;
inline constexpr std::size_t kCanonicalFirstCounterColumn = 7;

MeasurementTable load_measurements(const std::filesystem::path& path,
                                   std::size_t power_column,
                                   const std::vector<std::size_t>& counter_columns);

/// Canonical layout: power at column 5, every column from 7 on is a counter.
MeasurementTable load_measurements(const std::filesystem::path& path);

void save_measurements(const MeasurementTable& table, const std::filesystem::path& path);

/// events[i] / cycles, element-wise. A zero-cycle window is an idle window
/// and maps to an all-zero rate vector, not an error.
std::vector<double> rate_vector(const Sample& s);

/// Samples matching both filters, file order preserved. std::nullopt means
/// "no filter on that axis". Empty results are legal.
MeasurementTable slice(const MeasurementTable& table,
                       const std::optional<OperatingPoint>& point,
                       const std::optional<std::set<std::string>>& benchmarks);

// Benchmark split file: a `[train]` section and a `[test]` section, one
// label per line, `#` comments allowed.
BenchmarkSplit load_split(const std::filesystem::path& path);
void save_split(const BenchmarkSplit& split, const std::filesystem::path& path);

// DVFS ladder file: CSV with header `freq_hz,volt_v`, ascending frequency.
DvfsTable load_dvfs(const std::filesystem::path& path);
void save_dvfs(const DvfsTable& table, const std::filesystem::path& path);

/// Every sample's operating point must appear in the ladder.
void validate_points(const MeasurementTable& table, const DvfsTable& dvfs);

/// Minimal CSV layer shared by every emitted file: UTF-8, comma separated,
/// '.' decimal separator, no quoting, mandatory header. row_lines keeps the
/// 1-based source line of each row so diagnostics survive blank lines.
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;
};

CsvFile read_csv(const std::filesystem::path& path);

} // namespace powerscope
