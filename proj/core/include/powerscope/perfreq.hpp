#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "powerscope/regress.hpp"
#include "powerscope/types.hpp"

namespace powerscope {

/// One independently fitted coefficient set per operating point. A
/// 4-counter model over 13 points carries 13 x 5 parameters.
struct PerFreqModel {
    std::vector<std::string> counters;
    std::map<OperatingPoint, Coefficients> entries;
    std::string train_meta; // which benchmarks trained it
    std::string timestamp;  // ISO-8601 UTC, recorded at fit time
};

/// Fits one OLS model per ladder point over the training benchmarks.
/// Every ladder point must have enough training samples; a short point
/// aborts the whole fit and is named in the error.
PerFreqModel fit_per_freq(const MeasurementTable& table,
                          const BenchmarkSplit& split,
                          const DvfsTable& dvfs,
                          const std::vector<std::string>& counters);

/// Prediction for one sample. `catalog` is the counter catalog the sample's
/// events are aligned with; the model's counters are projected out of it.
/// Operating-point matching is exact — no nearest-frequency fallback.
double predict_power(const PerFreqModel& m,
                     std::span<const std::string> catalog,
                     const Sample& s);

/// Per-point MAPE and count-weighted overall on the given benchmark subset
/// (std::nullopt = all benchmarks). Samples at points the model does not
/// cover are skipped and counted, not errors.
FitReport evaluate(const PerFreqModel& m,
                   const MeasurementTable& table,
                   const std::optional<std::set<std::string>>& benchmarks);

// Model file `.pfm`: versioned plain text, one line per operating point,
// coefficients serialized with 17 significant digits so that save -> load
// reproduces every double bit for bit.
void save_pfm(const PerFreqModel& m, const std::filesystem::path& path);
PerFreqModel load_pfm(const std::filesystem::path& path);

} // namespace powerscope
