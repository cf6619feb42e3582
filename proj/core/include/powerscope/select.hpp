#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "powerscope/perfreq.hpp"
#include "powerscope/regress.hpp"
#include "powerscope/types.hpp"

namespace powerscope {

enum class SearchMode {
    bottom_up,  // greedy forward selection
    exhaustive, // every subset up to max_counters; cross-check oracle
    fixed,      // no search, fit the given counters verbatim
};

enum class SearchCriterion {
    avg_mape, // training MAPE averaged over operating points, unweighted
};

struct SearchConfig {
    std::size_t max_counters = 4;
    std::vector<std::string> candidate_counters;
    SearchMode mode = SearchMode::bottom_up;
    SearchCriterion criterion = SearchCriterion::avg_mape;
};

struct SearchStep {
    std::string counter;  // counter added at this step
    double criterion_pct; // criterion value after adding it
};

struct SearchResult {
    std::vector<std::string> chosen_counters;
    std::vector<SearchStep> per_step_scores; // empty for fixed/exhaustive
    double final_criterion_pct = 0.0;
    FitReport final_report; // training benchmarks
    PerFreqModel model;
    std::vector<std::string> warnings;
};

/// Ties on the criterion within this tolerance go to the earlier candidate;
/// the greedy search also stops once no addition improves by more than it.
inline constexpr double kSearchImprovementTolPct = 1e-9;

/// Selection always scores on training benchmarks: per-frequency OLS fit on
/// the train split, evaluated on the same split, averaged over ladder
/// points. Scoring on test error would leak the holdout into selection.
SearchResult search(const MeasurementTable& table,
                    const BenchmarkSplit& split,
                    const DvfsTable& dvfs,
                    const SearchConfig& cfg);

/// Fits each counter-set variant on the train split and reports its error
/// on the test benchmarks, one report per variant.
std::vector<FitReport> compare_models(const MeasurementTable& table,
                                      const BenchmarkSplit& split,
                                      const DvfsTable& dvfs,
                                      const std::vector<std::vector<std::string>>& variants);

} // namespace powerscope
