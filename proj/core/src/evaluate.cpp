#include "evaluate.hpp"

#include <algorithm>
#include <map>

#include "powerscope/errors.hpp"

namespace powerscope::detail {

std::vector<std::size_t> counter_projection(std::span<const std::string> catalog,
                                            std::span<const std::string> counters) {
    std::vector<std::size_t> indices;
    indices.reserve(counters.size());
    for (const auto& name : counters) {
        const auto it = std::find(catalog.begin(), catalog.end(), name);
        if (it == catalog.end()) {
            throw DataError("counter '" + name + "' is not in the table's catalog");
        }
        indices.push_back(static_cast<std::size_t>(it - catalog.begin()));
    }
    return indices;
}

std::vector<double> project_rates(const Sample& s, std::span<const std::size_t> indices) {
    std::vector<double> rates(indices.size(), 0.0);
    if (s.cycles == 0.0) return rates;
    for (std::size_t i = 0; i < indices.size(); ++i) rates[i] = s.events[indices[i]] / s.cycles;
    return rates;
}

FitReport evaluate_table(const MeasurementTable& table,
                         const std::optional<std::set<std::string>>& benchmarks,
                         const std::function<std::optional<double>(const Sample&)>& predictor) {
    struct Group {
        std::vector<double> predicted;
        std::vector<double> measured;
    };
    std::map<OperatingPoint, Group> groups;

    FitReport report;
    for (const auto& s : table.samples) {
        if (benchmarks && benchmarks->find(s.benchmark) == benchmarks->end()) continue;
        const auto p = predictor(s);
        if (!p) {
            ++report.skipped_unknown_point;
            continue;
        }
        auto& g = groups[s.point];
        g.predicted.push_back(*p);
        g.measured.push_back(s.power_w);
    }
    if (groups.empty()) throw NumericError("evaluate: empty evaluation set");

    for (const auto& [point, g] : groups) {
        std::size_t excluded_here = 0;
        for (double m : g.measured) {
            if (m <= kMapeMeasuredFloorW) ++excluded_here;
        }
        if (excluded_here == g.measured.size()) {
            // Nothing measurable at this point; keep the exclusions visible
            // in the totals but emit no per-point error.
            report.total_excluded += excluded_here;
            continue;
        }
        const MapeStats stats = mape_stats(g.predicted, g.measured);
        report.per_point[point] = PointStats{stats.pct, stats.count, stats.excluded};
        report.total_count += stats.count;
        report.total_excluded += stats.excluded;
    }
    if (report.per_point.empty()) throw NumericError("evaluate: empty evaluation set");
    report.overall_pct = weighted_overall(report.per_point);
    return report;
}

} // namespace powerscope::detail
