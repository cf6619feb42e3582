#include "powerscope/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string_view>

#include "powerscope/errors.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

using detail::format_full;
using detail::parse_double;
using detail::parse_int64;
using detail::split;
using detail::trim;

std::string row_ctx(const std::filesystem::path& path, std::size_t line_no) {
    return path.string() + ", row " + std::to_string(line_no);
}

double parse_cell(const std::filesystem::path& path, std::size_t line_no,
                  const std::string& column, std::string_view cell) {
    double v = 0.0;
    if (!parse_double(cell, v) || !std::isfinite(v)) {
        throw DataError(row_ctx(path, line_no) + ", column '" + column +
                        "': non-numeric cell '" + std::string(trim(cell)) + "'");
    }
    return v;
}

std::size_t find_named_column(const std::vector<std::string>& header, const std::string& name,
                              const std::filesystem::path& path) {
    std::size_t found = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::string(trim(header[i])) == name) {
            if (found != header.size()) {
                throw DataError(path.string() + ": duplicate column '" + name + "' in header");
            }
            found = i;
        }
    }
    if (found == header.size()) {
        throw DataError(path.string() + ": header has no '" + name + "' column");
    }
    return found;
}

std::string validated_label(std::string_view cell, const std::filesystem::path& path,
                            std::size_t line_no) {
    std::string label(trim(cell));
    if (label.empty()) {
        throw DataError(row_ctx(path, line_no) + ": empty benchmark label");
    }
    if (label.find(',') != std::string::npos) {
        throw DataError(row_ctx(path, line_no) + ": benchmark label must not contain ','");
    }
    return label;
}

} // namespace

CsvFile read_csv(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw DataError(path.string() + ": empty file, header required");
    CsvFile csv;
    csv.header = split(lines[0], ',');
    for (auto& h : csv.header) h = std::string(trim(h));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto cells = split(lines[i], ',');
        if (cells.size() != csv.header.size()) {
            throw DataError(row_ctx(path, i + 1) + ": expected " +
                            std::to_string(csv.header.size()) + " fields, got " +
                            std::to_string(cells.size()));
        }
        csv.rows.push_back(std::move(cells));
        csv.row_lines.push_back(i + 1);
    }
    return csv;
}

MeasurementTable load_measurements(const std::filesystem::path& path,
                                   std::size_t power_column,
                                   const std::vector<std::size_t>& counter_columns) {
    const CsvFile csv = read_csv(path);
    const std::size_t width = csv.header.size();

    auto check_index = [&](std::size_t col, const char* what) {
        if (col < 1 || col > width) {
            throw DataError(path.string() + ": " + what + " column index " +
                            std::to_string(col) + " out of range 1.." + std::to_string(width));
        }
    };
    check_index(power_column, "power");
    for (std::size_t c : counter_columns) check_index(c, "counter");

    const std::size_t bench_col = find_named_column(csv.header, "benchmark", path);
    const std::size_t freq_col = find_named_column(csv.header, "freq_hz", path);
    const std::size_t volt_col = find_named_column(csv.header, "volt_v", path);
    const std::size_t temp_col = find_named_column(csv.header, "temp_c", path);
    const std::size_t cycles_col = find_named_column(csv.header, "cycles", path);

    // Counter columns must be real counter data, not a re-pointed metadata
    // or power column.
    for (std::size_t c : counter_columns) {
        const std::size_t i = c - 1;
        if (i == bench_col || i == freq_col || i == volt_col || i == temp_col ||
            i == cycles_col || c == power_column) {
            throw DataError(path.string() + ": counter column " + std::to_string(c) +
                            " ('" + csv.header[i] + "') collides with a metadata column");
        }
    }

    MeasurementTable table;
    table.counter_names.reserve(counter_columns.size());
    for (std::size_t c : counter_columns) {
        const std::string& name = csv.header[c - 1];
        if (name.empty()) {
            throw DataError(path.string() + ": counter column " + std::to_string(c) +
                            " has an empty header name");
        }
        if (std::find(table.counter_names.begin(), table.counter_names.end(), name) !=
            table.counter_names.end()) {
            throw DataError(path.string() + ": duplicate counter name '" + name + "'");
        }
        table.counter_names.push_back(name);
    }

    table.samples.reserve(csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& cells = csv.rows[r];
        const std::size_t line_no = csv.row_lines[r];
        Sample s;
        s.benchmark = validated_label(cells[bench_col], path, line_no);

        std::int64_t freq = 0;
        if (!parse_int64(cells[freq_col], freq) || freq <= 0) {
            throw DataError(row_ctx(path, line_no) +
                            ": freq_hz must be a positive integer, got '" +
                            std::string(trim(cells[freq_col])) + "'");
        }
        s.point.frequency_hz = freq;
        s.point.voltage_v = parse_cell(path, line_no, "volt_v", cells[volt_col]);
        if (s.point.voltage_v <= 0.0) {
            throw DataError(row_ctx(path, line_no) + ": volt_v must be positive");
        }
        s.temperature_c = parse_cell(path, line_no, "temp_c", cells[temp_col]);
        s.power_w = parse_cell(path, line_no, csv.header[power_column - 1], cells[power_column - 1]);
        if (s.power_w < 0.0) {
            throw DataError(row_ctx(path, line_no) + ": negative power " +
                            format_full(s.power_w));
        }
        s.cycles = parse_cell(path, line_no, "cycles", cells[cycles_col]);
        if (s.cycles < 0.0) {
            throw DataError(row_ctx(path, line_no) + ": negative cycle count");
        }
        s.events.reserve(counter_columns.size());
        for (std::size_t k = 0; k < counter_columns.size(); ++k) {
            const double e =
                parse_cell(path, line_no, table.counter_names[k], cells[counter_columns[k] - 1]);
            if (e < 0.0) {
                throw DataError(row_ctx(path, line_no) + ": negative event count in '" +
                                table.counter_names[k] + "'");
            }
            s.events.push_back(e);
        }
        table.samples.push_back(std::move(s));
    }
    return table;
}

MeasurementTable load_measurements(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    if (csv.header.size() < kCanonicalFirstCounterColumn - 1) {
        throw DataError(path.string() + ": canonical layout needs at least " +
                        std::to_string(kCanonicalFirstCounterColumn - 1) + " columns");
    }
    std::vector<std::size_t> counters;
    for (std::size_t c = kCanonicalFirstCounterColumn; c <= csv.header.size(); ++c) {
        counters.push_back(c);
    }
    return load_measurements(path, kCanonicalPowerColumn, counters);
}

void save_measurements(const MeasurementTable& table, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "benchmark,freq_hz,volt_v,temp_c,power_w,cycles";
    for (const auto& name : table.counter_names) out << ',' << name;
    out << '\n';
    for (const auto& s : table.samples) {
        out << s.benchmark << ',' << s.point.frequency_hz << ',' << format_full(s.point.voltage_v)
            << ',' << format_full(s.temperature_c) << ',' << format_full(s.power_w) << ','
            << format_full(s.cycles);
        for (double e : s.events) out << ',' << format_full(e);
        out << '\n';
    }
    detail::write_file(path, out.str());
}

std::vector<double> rate_vector(const Sample& s) {
    std::vector<double> rates(s.events.size(), 0.0);
    if (s.cycles == 0.0) return rates; // idle window: intercept-only power
    for (std::size_t i = 0; i < s.events.size(); ++i) rates[i] = s.events[i] / s.cycles;
    return rates;
}

MeasurementTable slice(const MeasurementTable& table,
                       const std::optional<OperatingPoint>& point,
                       const std::optional<std::set<std::string>>& benchmarks) {
    MeasurementTable out;
    out.counter_names = table.counter_names;
    for (const auto& s : table.samples) {
        if (point && !(s.point == *point)) continue;
        if (benchmarks && benchmarks->find(s.benchmark) == benchmarks->end()) continue;
        out.samples.push_back(s);
    }
    return out;
}

BenchmarkSplit load_split(const std::filesystem::path& path) {
    BenchmarkSplit split;
    std::set<std::string>* section = nullptr;
    std::size_t line_no = 0;
    for (const auto& raw : detail::read_lines(path)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line == "[train]") {
            section = &split.train;
            continue;
        }
        if (line == "[test]") {
            section = &split.test;
            continue;
        }
        if (line.front() == '[') {
            throw DataError(row_ctx(path, line_no) + ": unknown section '" +
                            std::string(line) + "'");
        }
        if (!section) {
            throw DataError(row_ctx(path, line_no) +
                            ": benchmark label before any [train]/[test] section");
        }
        section->insert(std::string(line));
    }
    for (const auto& b : split.train) {
        if (split.test.count(b)) {
            throw DataError(path.string() + ": benchmark '" + b +
                            "' appears in both [train] and [test]");
        }
    }
    return split;
}

void save_split(const BenchmarkSplit& split, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "[train]\n";
    for (const auto& b : split.train) out << b << '\n';
    out << "[test]\n";
    for (const auto& b : split.test) out << b << '\n';
    detail::write_file(path, out.str());
}

DvfsTable load_dvfs(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    if (csv.header != std::vector<std::string>{"freq_hz", "volt_v"}) {
        throw DataError(path.string() + ": dvfs header must be exactly 'freq_hz,volt_v'");
    }
    std::vector<OperatingPoint> points;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& cells = csv.rows[r];
        const std::size_t line_no = csv.row_lines[r];
        OperatingPoint p;
        if (!parse_int64(cells[0], p.frequency_hz) || p.frequency_hz <= 0) {
            throw DataError(row_ctx(path, line_no) + ": freq_hz must be a positive integer");
        }
        p.voltage_v = parse_cell(path, line_no, "volt_v", cells[1]);
        if (p.voltage_v <= 0.0) {
            throw DataError(row_ctx(path, line_no) + ": volt_v must be positive");
        }
        points.push_back(p);
    }
    return DvfsTable(std::move(points));
}

void save_dvfs(const DvfsTable& table, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "freq_hz,volt_v\n";
    for (const auto& p : table.points()) {
        out << p.frequency_hz << ',' << format_full(p.voltage_v) << '\n';
    }
    detail::write_file(path, out.str());
}

void validate_points(const MeasurementTable& table, const DvfsTable& dvfs) {
    for (std::size_t i = 0; i < table.samples.size(); ++i) {
        if (!dvfs.contains(table.samples[i].point)) {
            throw DataError("sample " + std::to_string(i + 1) + " at " +
                            to_string(table.samples[i].point) +
                            " references a point absent from the dvfs table");
        }
    }
}

} // namespace powerscope
