#include "powerscope/thermal.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "powerscope/dataset.hpp"
#include "powerscope/errors.hpp"
#include "linfit.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

using detail::format_full;
using detail::parse_double;
using detail::parse_int64;

} // namespace

ZeroFreqPoint run_to_point(const ThermalRun& run) {
    if (run.voltage_v <= 0.0) throw DataError("thermal run: voltage must be positive");
    std::vector<double> freq, power, temp;
    for (const auto& p : run.samples) {
        if (p.frequency_hz <= 0) throw DataError("thermal run: frequency must be positive");
        if (p.idle_power_w <= 0.0) throw DataError("thermal run: idle power must be positive");
        freq.push_back(static_cast<double>(p.frequency_hz));
        power.push_back(p.idle_power_w);
        temp.push_back(p.temperature_c);
    }
    const std::size_t distinct =
        std::set<double>(freq.begin(), freq.end()).size();
    if (distinct < 2) {
        throw NumericError("thermal run is degenerate: needs at least 2 distinct frequencies");
    }
    // Both extrapolations share the same frequency axis: power at f = 0 is
    // the static power, temperature at f = 0 is the temperature it holds at.
    const detail::Line power_line = detail::linfit(freq, power);
    const detail::Line temp_line = detail::linfit(freq, temp);
    return ZeroFreqPoint{power_line.intercept, temp_line.intercept};
}

ThermalStaticModel fit_thermal_static(const std::vector<ThermalRun>& runs) {
    if (runs.size() < 2) {
        throw NumericError("fit_thermal_static: need at least 2 runs, got " +
                           std::to_string(runs.size()));
    }
    const double voltage = runs.front().voltage_v;
    for (const auto& run : runs) {
        if (run.voltage_v != voltage) {
            throw DataError("fit_thermal_static: runs mix voltages " + format_full(voltage) +
                            " and " + format_full(run.voltage_v));
        }
    }

    std::vector<double> temps, statics;
    for (const auto& run : runs) {
        const ZeroFreqPoint zp = run_to_point(run);
        temps.push_back(zp.temperature_c);
        statics.push_back(zp.static_w);
    }
    const auto [t_min_it, t_max_it] = std::minmax_element(temps.begin(), temps.end());
    if (*t_min_it == *t_max_it) {
        throw NumericError("fit_thermal_static: all runs sit at one temperature");
    }

    const detail::Line line = detail::linfit(temps, statics);
    if (line.slope < 0.0) {
        throw NumericError("fit_thermal_static: fitted slope " + format_full(line.slope) +
                           " W/C is negative; leakage cannot shrink with temperature");
    }

    ThermalStaticModel tm;
    tm.slope_w_per_c = line.slope;
    tm.intercept_w = line.intercept;
    tm.voltage_v = voltage;
    tm.t_min_c = *t_min_it;
    tm.t_max_c = *t_max_it;
    return tm;
}

double static_at(const ThermalStaticModel& tm, double temperature_c) {
    const double v = tm.slope_w_per_c * temperature_c + tm.intercept_w;
    if (v < 0.0) {
        throw NumericError("static_at: law gives negative static power at " +
                           format_full(temperature_c) + " C");
    }
    return v;
}

bool in_fitted_range(const ThermalStaticModel& tm, double temperature_c) {
    return temperature_c >= tm.t_min_c && temperature_c <= tm.t_max_c;
}

ThermalRun load_thermal_run(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    if (csv.header != std::vector<std::string>{"freq_hz", "volt_v", "idle_power_w", "temp_c"}) {
        throw DataError(path.string() +
                        ": run header must be exactly 'freq_hz,volt_v,idle_power_w,temp_c'");
    }
    ThermalRun run;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& cells = csv.rows[r];
        const std::size_t line_no = csv.row_lines[r];
        ThermalRun::Point p;
        if (!parse_int64(cells[0], p.frequency_hz) || p.frequency_hz <= 0) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": freq_hz must be a positive integer");
        }
        double volt = 0.0;
        if (!parse_double(cells[1], volt) || volt <= 0.0) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": volt_v must be positive");
        }
        if (run.samples.empty()) {
            run.voltage_v = volt;
        } else if (volt != run.voltage_v) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": a thermal run must hold one voltage, got " + format_full(volt) +
                            " after " + format_full(run.voltage_v));
        }
        if (!parse_double(cells[2], p.idle_power_w) || p.idle_power_w <= 0.0) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": idle_power_w must be positive");
        }
        if (!parse_double(cells[3], p.temperature_c)) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": bad temp_c cell");
        }
        run.samples.push_back(p);
    }
    if (run.samples.empty()) throw DataError(path.string() + ": empty thermal run");
    return run;
}

void save_thermal_run(const ThermalRun& run, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "freq_hz,volt_v,idle_power_w,temp_c\n";
    for (const auto& p : run.samples) {
        out << p.frequency_hz << ',' << format_full(run.voltage_v) << ','
            << format_full(p.idle_power_w) << ',' << format_full(p.temperature_c) << '\n';
    }
    detail::write_file(path, out.str());
}

} // namespace powerscope
