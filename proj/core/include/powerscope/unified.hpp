#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "powerscope/perfreq.hpp"
#include "powerscope/regress.hpp"
#include "powerscope/thermal.hpp"
#include "powerscope/types.hpp"

namespace powerscope {

/// Idle power swept over the DVFS ladder with no workload running.
struct IdleSweep {
    struct Point {
        OperatingPoint point;
        double idle_power_w = 0.0;
        double temperature_c = 0.0;
    };

    std::vector<Point> points;

    const Point* find(const OperatingPoint& p) const;
};

enum class StaticMethod {
    zero_freq_intercept, // idle-vs-frequency line intersected at f = 0
    dynamic_subtraction, // idle minus the alphaC * V^2 * f clock term
};

struct StaticPowerEstimate {
    double static_w = 0.0;
    double voltage_v = 0.0;
    double temperature_c = 0.0;
    StaticMethod method = StaticMethod::zero_freq_intercept;
    double slope_w_per_hz = 0.0; // idle-vs-frequency slope behind the estimate
};

/// Reference point of a unified model: lowest, middle (highest point still
/// at the base voltage) or highest ladder entry.
enum class Anchor { UAL, UAM, UAH };

/// One reference coefficient set scaled to every operating point. The
/// dynamic part of a prediction scales with frequency and voltage squared,
/// the static part with voltage only (exponent configurable, 2 by default,
/// no frequency term — leakage does not switch).
struct UnifiedModel {
    std::vector<std::string> counters;
    Coefficients reference;
    OperatingPoint ref_point;
    double static_w = 0.0;
    StaticMethod static_method = StaticMethod::zero_freq_intercept;
    double static_voltage_exponent = 2.0;
    Anchor anchor = Anchor::UAM;
    double t_ref_c = 23.0; // temperature the reference model was trained at
    std::optional<ThermalStaticModel> thermal;
};

std::string to_string(Anchor a);
Anchor anchor_from_string(const std::string& s);

/// Intercept of the idle-power-vs-frequency line over the sweep points at
/// the given voltage, taken at frequency zero. Needs at least two points at
/// that voltage; a negative intercept means the sweep is physically invalid.
StaticPowerEstimate estimate_static_zero_freq(const IdleSweep& sweep, double voltage_v);

/// Lumped switching-capacitance constant of the idle clock tree:
/// (idle - static) / (V^2 * f). Treated as frequency-invariant.
double clock_activity_constant(double idle_power_w, double static_w,
                               const OperatingPoint& point);

/// Static power at a high ladder point, obtained by subtracting the
/// alphaC * V^2 * f clock term from the measured idle power there.
StaticPowerEstimate estimate_static_high(const IdleSweep& sweep, double alpha_c,
                                         const OperatingPoint& high);

/// Scales a reference-point prediction to another operating point:
///   (p_ref - static) * (f_t/f_r) * (V_t/V_r)^2 + static * (V_t/V_r)^e
/// Ratios are target over reference. p_ref below static is accepted: a
/// model may under-predict and the scale must not hide that.
double scale_power(double p_ref_w, double static_ref_w, const OperatingPoint& ref,
                   const OperatingPoint& target, double static_voltage_exponent = 2.0);

UnifiedModel build_unified(const PerFreqModel& pf, Anchor anchor, const IdleSweep& sweep,
                           const DvfsTable& dvfs, double t_ref_c = 23.0,
                           double static_voltage_exponent = 2.0);

/// Works at any operating point with positive fields, including points
/// absent from the ladder the model was built on.
double predict_unified(const UnifiedModel& u, std::span<const std::string> catalog,
                       const Sample& s);

/// Temperature-aware prediction: the static power removed at the reference
/// is the law at the training temperature, the static power added back is
/// the law at the sample's own temperature. Requires the law to be fitted
/// at the reference voltage.
double predict_unified_thermal(const UnifiedModel& u, const ThermalStaticModel& tm,
                               std::span<const std::string> catalog, const Sample& s);

/// Per-point MAPE of the unified model on the given benchmark subset. Uses
/// the model's own thermal block when it has one and use_thermal is set.
FitReport evaluate_unified(const UnifiedModel& u, const MeasurementTable& table,
                           const std::optional<std::set<std::string>>& benchmarks,
                           bool use_thermal = true);

// Model file `.ufm`: version 1, counter list, reference coefficients,
// reference point, static description, anchor tag, optional thermal block.
// Same 17-significant-digit serialization contract as `.pfm`.
void save_ufm(const UnifiedModel& u, const std::filesystem::path& path);
UnifiedModel load_ufm(const std::filesystem::path& path);

// Sweep file: CSV with header `freq_hz,volt_v,idle_power_w,temp_c`.
IdleSweep load_idle_sweep(const std::filesystem::path& path);
void save_idle_sweep(const IdleSweep& sweep, const std::filesystem::path& path);

} // namespace powerscope
