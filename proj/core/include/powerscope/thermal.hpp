#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace powerscope {

/// Idle sweep at one fixed voltage and one fan setting: frequency, idle
/// power and the equilibrium temperature observed at each step.
struct ThermalRun {
    struct Point {
        std::int64_t frequency_hz = 0;
        double idle_power_w = 0.0;
        double temperature_c = 0.0;
    };

    double voltage_v = 0.0;
    std::vector<Point> samples;
};

/// Linear temperature -> static power law at one voltage. Leakage grows
/// with temperature, so the slope is never negative. [t_min_c, t_max_c]
/// brackets the temperatures the fit actually saw; extrapolating outside it
/// is allowed but visible via in_fitted_range.
struct ThermalStaticModel {
    double slope_w_per_c = 0.0;
    double intercept_w = 0.0;
    double voltage_v = 0.0;
    double t_min_c = 0.0;
    double t_max_c = 0.0;

    friend bool operator==(const ThermalStaticModel&, const ThermalStaticModel&) = default;
};

struct ZeroFreqPoint {
    double static_w = 0.0;
    double temperature_c = 0.0;
};

/// Extrapolates one run to frequency zero: a least-squares line of power vs
/// frequency gives the static power, a second line of temperature vs
/// frequency gives the temperature it applies at.
ZeroFreqPoint run_to_point(const ThermalRun& run);

/// Least-squares line through the zero-frequency points of several runs.
/// Runs must share one voltage and span at least two distinct temperatures.
ThermalStaticModel fit_thermal_static(const std::vector<ThermalRun>& runs);

double static_at(const ThermalStaticModel& tm, double temperature_c);
bool in_fitted_range(const ThermalStaticModel& tm, double temperature_c);

// Run file: CSV with header `freq_hz,volt_v,idle_power_w,temp_c`, one
// voltage per file.
ThermalRun load_thermal_run(const std::filesystem::path& path);
void save_thermal_run(const ThermalRun& run, const std::filesystem::path& path);

} // namespace powerscope
