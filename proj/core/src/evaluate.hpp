#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "powerscope/regress.hpp"
#include "powerscope/types.hpp"

namespace powerscope::detail {

/// Indices of `counters` inside `catalog`; throws DataError naming the
/// first counter that is missing.
std::vector<std::size_t> counter_projection(std::span<const std::string> catalog,
                                            std::span<const std::string> counters);

/// Cycle-normalized rates for the projected counters only.
std::vector<double> project_rates(const Sample& s, std::span<const std::size_t> indices);

/// Groups samples by operating point and assembles a FitReport. The
/// predictor returns nullopt to skip a sample (counted, not an error).
/// Per-point errors keep table order inside each group so repeated
/// evaluations of the same data are bit-identical.
FitReport evaluate_table(const MeasurementTable& table,
                         const std::optional<std::set<std::string>>& benchmarks,
                         const std::function<std::optional<double>(const Sample&)>& predictor);

} // namespace powerscope::detail
