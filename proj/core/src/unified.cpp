#include "powerscope/unified.hpp"

#include <cmath>
#include <sstream>

#include "powerscope/dataset.hpp"
#include "powerscope/errors.hpp"
#include "evaluate.hpp"
#include "linfit.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

using detail::format_sig17;
using detail::parse_double;
using detail::parse_int64;

void check_point_fields(const OperatingPoint& p, const char* what) {
    if (p.frequency_hz <= 0 || p.voltage_v <= 0.0) {
        throw DataError(std::string(what) + " has non-positive frequency or voltage: " +
                        to_string(p));
    }
}

// Core of every unified prediction. The static power removed from the
// reference and the static power added back at the target are allowed to
// differ (they do under the thermal law); keeping one code path makes the
// temperature-aware predictor collapse exactly onto the plain one when both
// statics coincide.
double scale_two_statics(double p_ref_w, double static_sub_w, double static_add_w,
                         const OperatingPoint& ref, const OperatingPoint& target,
                         double static_voltage_exponent) {
    check_point_fields(ref, "reference point");
    check_point_fields(target, "target point");
    const double freq_ratio = static_cast<double>(target.frequency_hz) /
                              static_cast<double>(ref.frequency_hz);
    const double volt_ratio = target.voltage_v / ref.voltage_v;
    const double volt_sq = volt_ratio * volt_ratio;
    const double volt_static = static_voltage_exponent == 2.0
                                   ? volt_sq
                                   : std::pow(volt_ratio, static_voltage_exponent);
    return (p_ref_w - static_sub_w) * freq_ratio * volt_sq + static_add_w * volt_static;
}

} // namespace

const IdleSweep::Point* IdleSweep::find(const OperatingPoint& p) const {
    for (const auto& sp : points) {
        if (sp.point == p) return &sp;
    }
    return nullptr;
}

std::string to_string(Anchor a) {
    switch (a) {
        case Anchor::UAL: return "UAL";
        case Anchor::UAM: return "UAM";
        case Anchor::UAH: return "UAH";
    }
    throw DataError("unknown anchor value");
}

Anchor anchor_from_string(const std::string& s) {
    if (s == "UAL") return Anchor::UAL;
    if (s == "UAM") return Anchor::UAM;
    if (s == "UAH") return Anchor::UAH;
    throw DataError("unknown anchor tag '" + s + "'");
}

StaticPowerEstimate estimate_static_zero_freq(const IdleSweep& sweep, double voltage_v) {
    std::vector<double> freq;
    std::vector<double> power;
    double temp_acc = 0.0;
    double min_idle = 0.0;
    for (const auto& sp : sweep.points) {
        if (sp.point.voltage_v != voltage_v) continue;
        if (sp.idle_power_w <= 0.0) {
            throw DataError("idle sweep point " + to_string(sp.point) +
                            " has non-positive idle power");
        }
        if (freq.empty() || sp.idle_power_w < min_idle) min_idle = sp.idle_power_w;
        freq.push_back(static_cast<double>(sp.point.frequency_hz));
        power.push_back(sp.idle_power_w);
        temp_acc += sp.temperature_c;
    }
    if (freq.size() < 2) {
        throw NumericError("static extraction needs at least 2 sweep points at " +
                           detail::format_full(voltage_v) + " V, found " +
                           std::to_string(freq.size()));
    }
    const detail::Line line = detail::linfit(freq, power);
    if (line.intercept < 0.0) {
        throw NumericError("static extraction produced a negative intercept (" +
                           detail::format_full(line.intercept) +
                           " W); the sweep is physically invalid");
    }
    if (line.intercept > min_idle) {
        throw NumericError("static extraction intercept exceeds the minimum idle power; "
                           "idle power must not fall with frequency");
    }
    StaticPowerEstimate est;
    est.static_w = line.intercept;
    est.voltage_v = voltage_v;
    est.temperature_c = temp_acc / static_cast<double>(freq.size());
    est.method = StaticMethod::zero_freq_intercept;
    est.slope_w_per_hz = line.slope;
    return est;
}

double clock_activity_constant(double idle_power_w, double static_w,
                               const OperatingPoint& point) {
    check_point_fields(point, "operating point");
    const double dynamic_w = idle_power_w - static_w;
    if (dynamic_w <= 0.0) {
        throw NumericError("clock activity constant: idle power " +
                           detail::format_full(idle_power_w) + " W leaves no dynamic component "
                           "above static " + detail::format_full(static_w) + " W");
    }
    return dynamic_w /
           (point.voltage_v * point.voltage_v * static_cast<double>(point.frequency_hz));
}

StaticPowerEstimate estimate_static_high(const IdleSweep& sweep, double alpha_c,
                                         const OperatingPoint& high) {
    if (alpha_c <= 0.0) {
        throw NumericError("estimate_static_high: alphaC must be positive");
    }
    check_point_fields(high, "high point");
    const IdleSweep::Point* sp = sweep.find(high);
    if (!sp) {
        throw DataError("estimate_static_high: sweep has no point " + to_string(high));
    }
    const double clock_w = alpha_c * high.voltage_v * high.voltage_v *
                           static_cast<double>(high.frequency_hz);
    const double static_w = sp->idle_power_w - clock_w;
    if (static_w < 0.0) {
        throw NumericError("estimate_static_high: clock power " + detail::format_full(clock_w) +
                           " W exceeds idle power at " + to_string(high) +
                           "; alphaC is inconsistent with the sweep");
    }
    StaticPowerEstimate est;
    est.static_w = static_w;
    est.voltage_v = high.voltage_v;
    est.temperature_c = sp->temperature_c;
    est.method = StaticMethod::dynamic_subtraction;
    est.slope_w_per_hz = 0.0;
    return est;
}

double scale_power(double p_ref_w, double static_ref_w, const OperatingPoint& ref,
                   const OperatingPoint& target, double static_voltage_exponent) {
    return scale_two_statics(p_ref_w, static_ref_w, static_ref_w, ref, target,
                             static_voltage_exponent);
}

UnifiedModel build_unified(const PerFreqModel& pf, Anchor anchor, const IdleSweep& sweep,
                           const DvfsTable& dvfs, double t_ref_c,
                           double static_voltage_exponent) {
    if (dvfs.empty()) throw DataError("build_unified: empty dvfs table");

    OperatingPoint ref;
    switch (anchor) {
        case Anchor::UAL: ref = dvfs.lowest(); break;
        case Anchor::UAM: ref = dvfs.mid_anchor(); break;
        case Anchor::UAH: ref = dvfs.highest(); break;
    }

    StaticPowerEstimate est = estimate_static_zero_freq(sweep, dvfs.base_voltage());
    if (anchor == Anchor::UAH) {
        // Walk the estimate up the ladder: the base-voltage intercept fixes
        // alphaC at the middle anchor, alphaC prices the clock tree at the
        // top, and what is left of the idle power there is the static part.
        const OperatingPoint mid = dvfs.mid_anchor();
        const IdleSweep::Point* sp = sweep.find(mid);
        if (!sp) {
            throw DataError("build_unified: sweep has no point " + to_string(mid) +
                            " needed to derive alphaC");
        }
        const double alpha_c = clock_activity_constant(sp->idle_power_w, est.static_w, mid);
        est = estimate_static_high(sweep, alpha_c, dvfs.highest());
    }

    const auto it = pf.entries.find(ref);
    if (it == pf.entries.end()) {
        throw DataError("build_unified: per-frequency model has no entry for anchor point " +
                        to_string(ref));
    }

    UnifiedModel u;
    u.counters = pf.counters;
    u.reference = it->second;
    u.ref_point = ref;
    u.static_w = est.static_w;
    u.static_method = est.method;
    u.static_voltage_exponent = static_voltage_exponent;
    u.anchor = anchor;
    u.t_ref_c = t_ref_c;
    return u;
}

double predict_unified(const UnifiedModel& u, std::span<const std::string> catalog,
                       const Sample& s) {
    const auto projection = detail::counter_projection(catalog, u.counters);
    const double p_ref = predict(u.reference, detail::project_rates(s, projection));
    return scale_two_statics(p_ref, u.static_w, u.static_w, u.ref_point, s.point,
                             u.static_voltage_exponent);
}

double predict_unified_thermal(const UnifiedModel& u, const ThermalStaticModel& tm,
                               std::span<const std::string> catalog, const Sample& s) {
    if (tm.voltage_v != u.ref_point.voltage_v) {
        throw DataError("thermal law is fitted at " + detail::format_full(tm.voltage_v) +
                        " V but the reference point runs at " +
                        detail::format_full(u.ref_point.voltage_v) + " V");
    }
    const auto projection = detail::counter_projection(catalog, u.counters);
    const double p_ref = predict(u.reference, detail::project_rates(s, projection));
    const double static_ref = static_at(tm, u.t_ref_c);
    const double static_sample = static_at(tm, s.temperature_c);
    return scale_two_statics(p_ref, static_ref, static_sample, u.ref_point, s.point,
                             u.static_voltage_exponent);
}

FitReport evaluate_unified(const UnifiedModel& u, const MeasurementTable& table,
                           const std::optional<std::set<std::string>>& benchmarks,
                           bool use_thermal) {
    const auto projection = detail::counter_projection(table.counter_names, u.counters);
    const bool thermal = use_thermal && u.thermal.has_value();
    return detail::evaluate_table(
        table, benchmarks, [&](const Sample& s) -> std::optional<double> {
            const double p_ref = predict(u.reference, detail::project_rates(s, projection));
            if (thermal) {
                const double static_ref = static_at(*u.thermal, u.t_ref_c);
                const double static_sample = static_at(*u.thermal, s.temperature_c);
                return scale_two_statics(p_ref, static_ref, static_sample, u.ref_point, s.point,
                                         u.static_voltage_exponent);
            }
            return scale_two_statics(p_ref, u.static_w, u.static_w, u.ref_point, s.point,
                                     u.static_voltage_exponent);
        });
}

namespace {

std::string method_tag(StaticMethod m) {
    return m == StaticMethod::zero_freq_intercept ? "zero_freq_intercept"
                                                  : "dynamic_subtraction";
}

StaticMethod method_from_tag(const std::string& s) {
    if (s == "zero_freq_intercept") return StaticMethod::zero_freq_intercept;
    if (s == "dynamic_subtraction") return StaticMethod::dynamic_subtraction;
    throw DataError("unknown static method tag '" + s + "'");
}

} // namespace

void save_ufm(const UnifiedModel& u, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "ufm 1\n";
    out << "counters " << u.counters.size();
    for (const auto& c : u.counters) out << ' ' << c;
    out << '\n';
    out << "anchor " << to_string(u.anchor) << '\n';
    out << "ref_point " << u.ref_point.frequency_hz << ' ' << format_sig17(u.ref_point.voltage_v)
        << '\n';
    out << "static_w " << format_sig17(u.static_w) << '\n';
    out << "static_method " << method_tag(u.static_method) << '\n';
    out << "static_vexp " << format_sig17(u.static_voltage_exponent) << '\n';
    out << "t_ref_c " << format_sig17(u.t_ref_c) << '\n';
    out << "coeffs " << format_sig17(u.reference.intercept_w);
    for (double s : u.reference.slopes_w) out << ' ' << format_sig17(s);
    out << '\n';
    out << "thermal " << (u.thermal ? 1 : 0) << '\n';
    if (u.thermal) {
        out << "thermal_slope_w_per_c " << format_sig17(u.thermal->slope_w_per_c) << '\n';
        out << "thermal_intercept_w " << format_sig17(u.thermal->intercept_w) << '\n';
        out << "thermal_voltage_v " << format_sig17(u.thermal->voltage_v) << '\n';
        out << "thermal_t_min_c " << format_sig17(u.thermal->t_min_c) << '\n';
        out << "thermal_t_max_c " << format_sig17(u.thermal->t_max_c) << '\n';
    }
    detail::write_file(path, out.str());
}

UnifiedModel load_ufm(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    std::size_t next = 0;
    auto record = [&](const std::string& tag) {
        while (next < lines.size() && detail::trim(lines[next]).empty()) ++next;
        if (next >= lines.size()) {
            throw DataError(path.string() + ": truncated file, expected '" + tag + "'");
        }
        auto fields = detail::split(lines[next], ' ');
        std::erase_if(fields, [](const std::string& f) { return f.empty(); });
        ++next;
        if (fields.empty() || fields[0] != tag) {
            throw DataError(path.string() + ": expected '" + tag + "' record");
        }
        return fields;
    };
    auto number = [&](const std::string& field, const char* what) {
        double v = 0.0;
        if (!parse_double(field, v)) {
            throw DataError(path.string() + ": bad " + what + " value '" + field + "'");
        }
        return v;
    };

    const auto magic = record("ufm");
    if (magic.size() != 2 || magic[1] != "1") {
        throw DataError(path.string() + ": unsupported ufm version");
    }

    UnifiedModel u;
    const auto counters = record("counters");
    if (counters.size() < 2) throw DataError(path.string() + ": bad counters record");
    std::int64_t n_counters = 0;
    if (!parse_int64(counters[1], n_counters) || n_counters < 0 ||
        counters.size() != static_cast<std::size_t>(n_counters) + 2) {
        throw DataError(path.string() + ": counter count does not match the listed names");
    }
    u.counters.assign(counters.begin() + 2, counters.end());

    const auto anchor = record("anchor");
    if (anchor.size() != 2) throw DataError(path.string() + ": bad anchor record");
    u.anchor = anchor_from_string(anchor[1]);

    const auto ref = record("ref_point");
    if (ref.size() != 3 || !parse_int64(ref[1], u.ref_point.frequency_hz) ||
        u.ref_point.frequency_hz <= 0) {
        throw DataError(path.string() + ": bad ref_point record");
    }
    u.ref_point.voltage_v = number(ref[2], "reference voltage");

    const auto stat = record("static_w");
    if (stat.size() != 2) throw DataError(path.string() + ": bad static_w record");
    u.static_w = number(stat[1], "static power");

    const auto method = record("static_method");
    if (method.size() != 2) throw DataError(path.string() + ": bad static_method record");
    u.static_method = method_from_tag(method[1]);

    const auto vexp = record("static_vexp");
    if (vexp.size() != 2) throw DataError(path.string() + ": bad static_vexp record");
    u.static_voltage_exponent = number(vexp[1], "static voltage exponent");

    const auto tref = record("t_ref_c");
    if (tref.size() != 2) throw DataError(path.string() + ": bad t_ref_c record");
    u.t_ref_c = number(tref[1], "reference temperature");

    const auto coeffs = record("coeffs");
    if (coeffs.size() != u.counters.size() + 2) {
        throw DataError(path.string() + ": coeffs record has wrong field count");
    }
    u.reference.intercept_w = number(coeffs[1], "intercept");
    for (std::size_t i = 0; i < u.counters.size(); ++i) {
        u.reference.slopes_w.push_back(number(coeffs[2 + i], "slope"));
    }

    const auto thermal = record("thermal");
    if (thermal.size() != 2 || (thermal[1] != "0" && thermal[1] != "1")) {
        throw DataError(path.string() + ": bad thermal record");
    }
    if (thermal[1] == "1") {
        ThermalStaticModel tm;
        auto read_one = [&](const std::string& tag, double& out) {
            const auto rec = record(tag);
            if (rec.size() != 2) throw DataError(path.string() + ": bad " + tag + " record");
            out = number(rec[1], tag.c_str());
        };
        read_one("thermal_slope_w_per_c", tm.slope_w_per_c);
        read_one("thermal_intercept_w", tm.intercept_w);
        read_one("thermal_voltage_v", tm.voltage_v);
        read_one("thermal_t_min_c", tm.t_min_c);
        read_one("thermal_t_max_c", tm.t_max_c);
        u.thermal = tm;
    }
    return u;
}

IdleSweep load_idle_sweep(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    if (csv.header != std::vector<std::string>{"freq_hz", "volt_v", "idle_power_w", "temp_c"}) {
        throw DataError(path.string() +
                        ": sweep header must be exactly 'freq_hz,volt_v,idle_power_w,temp_c'");
    }
    IdleSweep sweep;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& cells = csv.rows[r];
        const std::size_t line_no = csv.row_lines[r];
        IdleSweep::Point sp;
        if (!parse_int64(cells[0], sp.point.frequency_hz) || sp.point.frequency_hz <= 0) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": freq_hz must be a positive integer");
        }
        double volt = 0.0, power = 0.0, temp = 0.0;
        if (!parse_double(cells[1], volt) || volt <= 0.0) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": volt_v must be positive");
        }
        if (!parse_double(cells[2], power) || power <= 0.0) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": idle_power_w must be positive");
        }
        if (!parse_double(cells[3], temp)) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": bad temp_c cell");
        }
        sp.point.voltage_v = volt;
        sp.idle_power_w = power;
        sp.temperature_c = temp;
        if (sweep.find(sp.point)) {
            throw DataError(path.string() + ", row " + std::to_string(line_no) +
                            ": duplicate sweep point " + to_string(sp.point));
        }
        sweep.points.push_back(sp);
    }
    return sweep;
}

void save_idle_sweep(const IdleSweep& sweep, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "freq_hz,volt_v,idle_power_w,temp_c\n";
    for (const auto& sp : sweep.points) {
        out << sp.point.frequency_hz << ',' << detail::format_full(sp.point.voltage_v) << ','
            << detail::format_full(sp.idle_power_w) << ','
            << detail::format_full(sp.temperature_c) << '\n';
    }
    detail::write_file(path, out.str());
}

} // namespace powerscope
