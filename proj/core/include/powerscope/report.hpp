#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "powerscope/regress.hpp"
#include "powerscope/types.hpp"

namespace powerscope {

/// Plot-ready table: a header row plus string cells. No plotting dependency
/// on purpose — the CSV is the deliverable, figures are the user's tooling.
struct TableDoc {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

/// Per-point error comparison across models: one row per operating point
/// (ascending) plus a final "overall" row, one column per model label.
/// Reports with mismatched point sets are merged by union, missing cells
/// stay blank.
TableDoc error_table(const std::vector<std::pair<std::string, FitReport>>& reports);

/// Prediction-vs-measured trace. `sample_indices` are the row positions in
/// the original table. Negative predictions are kept as-is in predicted_w,
/// clamped to zero in clamped_w and flagged in the last column; percentage
/// error is left blank when the measured value sits at the MAPE floor.
TableDoc trace(const MeasurementTable& samples, std::span<const double> predicted,
               std::span<const std::size_t> sample_indices);

/// One-page human summary; numbers rounded to 4 significant digits.
std::string fit_summary(const std::vector<std::pair<std::string, FitReport>>& reports,
                        const std::vector<std::string>& notes = {});

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace powerscope
