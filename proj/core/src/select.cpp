#include "powerscope/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "powerscope/errors.hpp"
#include "evaluate.hpp"
#include "parallel.hpp"

namespace powerscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Training rows of one ladder point, rates expanded over all candidates.
struct PointData {
    OperatingPoint point;
    std::vector<std::vector<double>> rates; // sample x candidate
    std::vector<double> power;
};

std::vector<PointData> bucket_training_rows(const MeasurementTable& table,
                                            const BenchmarkSplit& split,
                                            const DvfsTable& dvfs,
                                            const std::vector<std::size_t>& projection) {
    std::vector<PointData> data(dvfs.size());
    for (std::size_t i = 0; i < dvfs.size(); ++i) data[i].point = dvfs.points()[i];
    for (const auto& s : table.samples) {
        if (!split.train.count(s.benchmark)) continue;
        for (auto& pd : data) {
            if (s.point == pd.point) {
                pd.rates.push_back(detail::project_rates(s, projection));
                pd.power.push_back(s.power_w);
                break;
            }
        }
    }
    return data;
}

// Train-set MAPE of an OLS fit restricted to `subset` columns at one point.
// Numeric failures (collinear subset, nothing measurable) disqualify the
// subset instead of aborting the search.
double point_train_mape(const PointData& pd, const std::vector<std::size_t>& subset) {
    std::vector<RateRow> rows;
    rows.reserve(pd.rates.size());
    for (std::size_t i = 0; i < pd.rates.size(); ++i) {
        RateRow row;
        row.rates.reserve(subset.size());
        for (std::size_t c : subset) row.rates.push_back(pd.rates[i][c]);
        row.power_w = pd.power[i];
        rows.push_back(std::move(row));
    }
    try {
        const Coefficients c = ols_fit(rows);
        std::vector<double> predicted(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) predicted[i] = predict(c, rows[i].rates);
        return mape(predicted, pd.power);
    } catch (const NumericError&) {
        return kInf;
    }
}

// Criterion: training MAPE averaged over ladder points, each point weighted
// equally. Reduction runs in ladder order regardless of scheduling.
double criterion_value(const std::vector<PointData>& data,
                       const std::vector<std::size_t>& subset) {
    std::vector<double> per_point(data.size(), kInf);
    detail::parallel_for(data.size(),
                         [&](std::size_t i) { per_point[i] = point_train_mape(data[i], subset); });
    double acc = 0.0;
    for (double v : per_point) {
        if (std::isinf(v)) return kInf;
        acc += v;
    }
    return acc / static_cast<double>(data.size());
}

} // namespace

SearchResult search(const MeasurementTable& table,
                    const BenchmarkSplit& split,
                    const DvfsTable& dvfs,
                    const SearchConfig& cfg) {
    if (split.train.empty()) throw DataError("search: empty training split");
    if (dvfs.empty()) throw DataError("search: empty dvfs table");
    if (cfg.max_counters < 1) throw DataError("search: max_counters must be at least 1");
    if (cfg.candidate_counters.empty()) throw DataError("search: empty candidate counter set");
    if (cfg.criterion != SearchCriterion::avg_mape) {
        throw DataError("search: unsupported selection criterion");
    }

    const auto projection =
        detail::counter_projection(table.counter_names, cfg.candidate_counters);
    auto data = bucket_training_rows(table, split, dvfs, projection);

    const std::size_t largest_k = cfg.mode == SearchMode::fixed
                                      ? cfg.candidate_counters.size()
                                      : std::min(cfg.max_counters, cfg.candidate_counters.size());
    for (const auto& pd : data) {
        if (pd.rates.size() < largest_k + 2) {
            throw DataError("search: point " + to_string(pd.point) + " has " +
                            std::to_string(pd.rates.size()) +
                            " training samples, need at least " + std::to_string(largest_k + 2));
        }
    }

    SearchResult result;

    // A candidate whose rate column is flat inside every point's training
    // slice can only mirror the intercept; drop it up front.
    std::vector<std::size_t> candidates;
    if (cfg.mode == SearchMode::fixed) {
        for (std::size_t c = 0; c < cfg.candidate_counters.size(); ++c) candidates.push_back(c);
    } else {
        for (std::size_t c = 0; c < cfg.candidate_counters.size(); ++c) {
            bool constant_everywhere = true;
            for (const auto& pd : data) {
                for (std::size_t i = 1; i < pd.rates.size(); ++i) {
                    if (pd.rates[i][c] != pd.rates[0][c]) {
                        constant_everywhere = false;
                        break;
                    }
                }
                if (!constant_everywhere) break;
            }
            if (constant_everywhere) {
                result.warnings.push_back("counter '" + cfg.candidate_counters[c] +
                                          "' is constant across all training samples at every "
                                          "point; skipped");
            } else {
                candidates.push_back(c);
            }
        }
        if (candidates.empty()) {
            throw DataError("search: no usable candidate counters (all constant)");
        }
    }

    std::vector<std::size_t> chosen;
    if (cfg.mode == SearchMode::fixed) {
        chosen = candidates;
        result.final_criterion_pct = criterion_value(data, chosen);
    } else if (cfg.mode == SearchMode::bottom_up) {
        double best = criterion_value(data, {});
        if (std::isinf(best)) throw NumericError("search: criterion undefined on this data");
        while (chosen.size() < cfg.max_counters) {
            std::vector<std::size_t> remaining;
            for (std::size_t c : candidates) {
                if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) {
                    remaining.push_back(c);
                }
            }
            if (remaining.empty()) break;

            // Score every extension of the current set; ties inside the
            // tolerance go to the earlier candidate.
            std::vector<double> scores(remaining.size(), kInf);
            detail::parallel_for(remaining.size(), [&](std::size_t j) {
                auto subset = chosen;
                subset.push_back(remaining[j]);
                scores[j] = criterion_value(data, subset);
            });
            std::size_t best_j = remaining.size();
            double best_score = kInf;
            for (std::size_t j = 0; j < remaining.size(); ++j) {
                if (scores[j] < best_score - kSearchImprovementTolPct) {
                    best_j = j;
                    best_score = scores[j];
                }
            }
            if (best_j == remaining.size() || best_score >= best - kSearchImprovementTolPct) {
                break; // no addition improves the criterion
            }
            chosen.push_back(remaining[best_j]);
            best = best_score;
            result.per_step_scores.push_back(
                SearchStep{cfg.candidate_counters[remaining[best_j]], best_score});
        }
        result.final_criterion_pct =
            result.per_step_scores.empty() ? best : result.per_step_scores.back().criterion_pct;
    } else { // exhaustive
        const std::size_t max_k = std::min(cfg.max_counters, candidates.size());
        std::vector<std::size_t> best_subset;
        double best = kInf;
        std::vector<std::size_t> combo;
        // Subsets in (size, lexicographic) order; first strict minimizer wins.
        auto consider = [&](const std::vector<std::size_t>& subset) {
            const double score = criterion_value(data, subset);
            if (score < best - kSearchImprovementTolPct) {
                best = score;
                best_subset = subset;
            }
        };
        consider({});
        for (std::size_t k = 1; k <= max_k; ++k) {
            combo.assign(k, 0);
            // Standard combination walk over candidate indices.
            std::vector<std::size_t> pos(k);
            for (std::size_t i = 0; i < k; ++i) pos[i] = i;
            for (;;) {
                for (std::size_t i = 0; i < k; ++i) combo[i] = candidates[pos[i]];
                consider(combo);
                std::size_t i = k;
                while (i > 0 && pos[i - 1] == candidates.size() - k + (i - 1)) --i;
                if (i == 0) break;
                ++pos[i - 1];
                for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
            }
        }
        if (std::isinf(best)) throw NumericError("search: criterion undefined on this data");
        chosen = best_subset;
        result.final_criterion_pct = best;
    }

    for (std::size_t c : chosen) result.chosen_counters.push_back(cfg.candidate_counters[c]);
    result.model = fit_per_freq(table, split, dvfs, result.chosen_counters);
    result.final_report = evaluate(result.model, table, split.train);
    return result;
}

std::vector<FitReport> compare_models(const MeasurementTable& table,
                                      const BenchmarkSplit& split,
                                      const DvfsTable& dvfs,
                                      const std::vector<std::vector<std::string>>& variants) {
    if (!variants.empty() && split.test.empty()) {
        throw DataError("compare_models: empty test split");
    }
    std::vector<FitReport> reports;
    reports.reserve(variants.size());
    for (const auto& counters : variants) {
        const PerFreqModel m = fit_per_freq(table, split, dvfs, counters);
        reports.push_back(evaluate(m, table, split.test));
    }
    return reports;
}

} // namespace powerscope
