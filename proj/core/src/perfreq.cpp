#include "powerscope/perfreq.hpp"

#include <sstream>

#include "powerscope/dataset.hpp"
#include "powerscope/errors.hpp"
#include "evaluate.hpp"
#include "parallel.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

using detail::format_sig17;
using detail::parse_double;
using detail::parse_int64;
using detail::split;

std::string describe_split(const BenchmarkSplit& split) {
    std::ostringstream out;
    out << "train:";
    bool first = true;
    for (const auto& b : split.train) {
        out << (first ? "" : ",") << b;
        first = false;
    }
    out << " test:";
    first = true;
    for (const auto& b : split.test) {
        out << (first ? "" : ",") << b;
        first = false;
    }
    return out.str();
}

} // namespace

PerFreqModel fit_per_freq(const MeasurementTable& table,
                          const BenchmarkSplit& split,
                          const DvfsTable& dvfs,
                          const std::vector<std::string>& counters) {
    if (split.train.empty()) throw DataError("fit_per_freq: empty training split");
    if (dvfs.empty()) throw DataError("fit_per_freq: empty dvfs table");
    const auto projection = detail::counter_projection(table.counter_names, counters);

    // Pre-bucket training rows per ladder point; the per-point fits are
    // independent and run on the thread budget.
    const auto& points = dvfs.points();
    std::vector<std::vector<RateRow>> rows_per_point(points.size());
    for (const auto& s : table.samples) {
        if (!split.train.count(s.benchmark)) continue;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (s.point == points[i]) {
                rows_per_point[i].push_back(
                    RateRow{detail::project_rates(s, projection), s.power_w});
                break;
            }
        }
    }

    std::vector<Coefficients> fitted(points.size());
    detail::parallel_for(points.size(), [&](std::size_t i) {
        const auto& rows = rows_per_point[i];
        if (rows.size() < counters.size() + 1) {
            throw NumericError("fit_per_freq: point " + to_string(points[i]) + " has " +
                               std::to_string(rows.size()) + " training samples, need at least " +
                               std::to_string(counters.size() + 1));
        }
        try {
            fitted[i] = ols_fit(rows, counters);
        } catch (const NumericError& e) {
            throw NumericError("fit_per_freq: point " + to_string(points[i]) + ": " + e.what());
        }
    });

    PerFreqModel m;
    m.counters = counters;
    for (std::size_t i = 0; i < points.size(); ++i) m.entries[points[i]] = std::move(fitted[i]);
    m.train_meta = describe_split(split);
    m.timestamp = detail::iso8601_utc_now();
    return m;
}

double predict_power(const PerFreqModel& m,
                     std::span<const std::string> catalog,
                     const Sample& s) {
    const auto it = m.entries.find(s.point);
    if (it == m.entries.end()) {
        throw DataError("predict_power: no model entry for " + to_string(s.point));
    }
    const auto projection = detail::counter_projection(catalog, m.counters);
    const auto rates = detail::project_rates(s, projection);
    return predict(it->second, rates);
}

FitReport evaluate(const PerFreqModel& m,
                   const MeasurementTable& table,
                   const std::optional<std::set<std::string>>& benchmarks) {
    const auto projection = detail::counter_projection(table.counter_names, m.counters);
    return detail::evaluate_table(
        table, benchmarks, [&](const Sample& s) -> std::optional<double> {
            const auto it = m.entries.find(s.point);
            if (it == m.entries.end()) return std::nullopt; // fit points only contribute
            return predict(it->second, detail::project_rates(s, projection));
        });
}

void save_pfm(const PerFreqModel& m, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "pfm 1\n";
    out << "counters " << m.counters.size();
    for (const auto& c : m.counters) out << ' ' << c;
    out << '\n';
    out << "train_meta " << m.train_meta << '\n';
    out << "timestamp " << m.timestamp << '\n';
    out << "points " << m.entries.size() << '\n';
    for (const auto& [point, coeffs] : m.entries) {
        out << "point " << point.frequency_hz << ' ' << format_sig17(point.voltage_v) << ' '
            << format_sig17(coeffs.intercept_w);
        for (double s : coeffs.slopes_w) out << ' ' << format_sig17(s);
        out << '\n';
    }
    detail::write_file(path, out.str());
}

namespace {

// Line-oriented key/value reader shared by the two model formats.
struct ModelReader {
    std::filesystem::path path;
    std::vector<std::string> lines;
    std::size_t next = 0;

    explicit ModelReader(const std::filesystem::path& p)
        : path(p), lines(detail::read_lines(p)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError(path.string() + ", line " + std::to_string(next) + ": " + msg);
    }

    // Splits the next line on spaces and checks its tag.
    std::vector<std::string> record(const std::string& tag) {
        while (next < lines.size() && detail::trim(lines[next]).empty()) ++next;
        if (next >= lines.size()) {
            throw DataError(path.string() + ": truncated file, expected '" + tag + "'");
        }
        auto fields = split(lines[next], ' ');
        std::erase_if(fields, [](const std::string& f) { return f.empty(); });
        ++next;
        if (fields.empty() || fields[0] != tag) fail("expected '" + tag + "' record");
        return fields;
    }

    // Remainder of the next line after the tag, verbatim.
    std::string rest_of_line(const std::string& tag) {
        while (next < lines.size() && detail::trim(lines[next]).empty()) ++next;
        if (next >= lines.size()) {
            throw DataError(path.string() + ": truncated file, expected '" + tag + "'");
        }
        const std::string& line = lines[next];
        ++next;
        if (line.substr(0, tag.size()) != tag) fail("expected '" + tag + "' record");
        std::string rest = line.substr(tag.size());
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        return rest;
    }

    double number(const std::string& field, const std::string& what) const {
        double v = 0.0;
        if (!parse_double(field, v)) {
            throw DataError(path.string() + ": bad " + what + " value '" + field + "'");
        }
        return v;
    }
};

} // namespace

PerFreqModel load_pfm(const std::filesystem::path& path) {
    ModelReader in(path);
    const auto magic = in.record("pfm");
    if (magic.size() != 2 || magic[1] != "1") {
        throw DataError(path.string() + ": unsupported pfm version");
    }

    PerFreqModel m;
    const auto counters = in.record("counters");
    if (counters.size() < 2) in.fail("counters record needs a count");
    std::int64_t n_counters = 0;
    if (!parse_int64(counters[1], n_counters) || n_counters < 0 ||
        counters.size() != static_cast<std::size_t>(n_counters) + 2) {
        in.fail("counter count does not match the listed names");
    }
    m.counters.assign(counters.begin() + 2, counters.end());

    m.train_meta = in.rest_of_line("train_meta");
    m.timestamp = in.rest_of_line("timestamp");

    const auto points = in.record("points");
    std::int64_t n_points = 0;
    if (points.size() != 2 || !parse_int64(points[1], n_points) || n_points < 0) {
        in.fail("bad points count");
    }
    for (std::int64_t i = 0; i < n_points; ++i) {
        const auto rec = in.record("point");
        if (rec.size() != 4 + m.counters.size()) in.fail("point record has wrong field count");
        OperatingPoint p;
        if (!parse_int64(rec[1], p.frequency_hz) || p.frequency_hz <= 0) {
            in.fail("bad point frequency");
        }
        p.voltage_v = in.number(rec[2], "point voltage");
        Coefficients c;
        c.intercept_w = in.number(rec[3], "intercept");
        for (std::size_t j = 0; j < m.counters.size(); ++j) {
            c.slopes_w.push_back(in.number(rec[4 + j], "slope"));
        }
        if (!m.entries.emplace(p, std::move(c)).second) {
            in.fail("duplicate point " + to_string(p));
        }
    }
    return m;
}

} // namespace powerscope
