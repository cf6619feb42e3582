#include "powerscope/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "powerscope/errors.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

using detail::format_full;
using detail::format_human;

} // namespace

std::string TableDoc::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw DataError("table row has " + std::to_string(row.size()) + " cells, header has " +
                            std::to_string(header.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

TableDoc error_table(const std::vector<std::pair<std::string, FitReport>>& reports) {
    if (reports.empty()) throw DataError("error_table: no reports");

    TableDoc doc;
    doc.header = {"freq_hz", "volt_v"};
    for (const auto& [label, report] : reports) doc.header.push_back(label);

    // Union of operating points; map ordering keeps them ascending.
    std::set<OperatingPoint> points;
    for (const auto& [label, report] : reports) {
        for (const auto& [point, stats] : report.per_point) points.insert(point);
    }

    for (const auto& point : points) {
        std::vector<std::string> row{std::to_string(point.frequency_hz),
                                     format_full(point.voltage_v)};
        for (const auto& [label, report] : reports) {
            const auto it = report.per_point.find(point);
            row.push_back(it == report.per_point.end() ? "" : format_full(it->second.mape_pct));
        }
        doc.rows.push_back(std::move(row));
    }

    std::vector<std::string> overall{"overall", ""};
    for (const auto& [label, report] : reports) overall.push_back(format_full(report.overall_pct));
    doc.rows.push_back(std::move(overall));
    return doc;
}

TableDoc trace(const MeasurementTable& samples, std::span<const double> predicted,
               std::span<const std::size_t> sample_indices) {
    if (predicted.size() != samples.samples.size() ||
        sample_indices.size() != samples.samples.size()) {
        throw DataError("trace: predictions, indices and samples must have equal length");
    }

    TableDoc doc;
    doc.header = {"sample_idx", "benchmark", "freq_hz",   "volt_v", "measured_w",
                  "predicted_w", "clamped_w", "abs_err_w", "pct_err", "clamped"};
    for (std::size_t i = 0; i < samples.samples.size(); ++i) {
        const Sample& s = samples.samples[i];
        const double raw = predicted[i];
        const bool clamp = raw < 0.0;
        const double shown = clamp ? 0.0 : raw;
        const double abs_err = std::abs(raw - s.power_w);
        std::string pct;
        if (s.power_w > kMapeMeasuredFloorW) {
            pct = format_full(abs_err / s.power_w * 100.0);
        }
        doc.rows.push_back({std::to_string(sample_indices[i]), s.benchmark,
                            std::to_string(s.point.frequency_hz), format_full(s.point.voltage_v),
                            format_full(s.power_w), format_full(raw), format_full(shown),
                            format_full(abs_err), pct, clamp ? "1" : "0"});
    }
    return doc;
}

std::string fit_summary(const std::vector<std::pair<std::string, FitReport>>& reports,
                        const std::vector<std::string>& notes) {
    std::ostringstream out;
    out << "power model error summary\n";
    out << "=========================\n";
    for (const auto& [label, report] : reports) {
        out << '\n' << label << ":\n";
        out << "  overall MAPE: " << format_human(report.overall_pct) << " % over "
            << report.total_count << " samples";
        if (report.total_excluded > 0) {
            out << " (" << report.total_excluded << " excluded at the measurement floor)";
        }
        if (report.skipped_unknown_point > 0) {
            out << " (" << report.skipped_unknown_point << " skipped at unmodelled points)";
        }
        out << '\n';
        for (const auto& [point, stats] : report.per_point) {
            out << "    " << to_string(point) << ": " << format_human(stats.mape_pct) << " %  (n="
                << stats.count << ")\n";
        }
    }
    if (!notes.empty()) {
        out << '\n';
        for (const auto& note : notes) out << note << '\n';
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    detail::write_file(path, text);
}

} // namespace powerscope
