#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "powerscope/regress.hpp"
#include "powerscope/thermal.hpp"
#include "powerscope/types.hpp"
#include "powerscope/unified.hpp"

namespace powerscope {

struct RateEnvelope {
    double min_rate = 0.0;
    double max_rate = 0.0;
};

struct BenchmarkEnvelope {
    std::string name;
    std::vector<RateEnvelope> rates; // one per counter
};

enum class StaticLaw {
    constant,     // static_w at every temperature
    thermal_line, // slope * T + intercept
};

/// Ground-truth generative model. Everything downstream fits against data
/// produced here, so the true parameters are always recoverable.
struct GeneratorSpec {
    std::vector<std::string> counters;
    Coefficients reference; // true coefficients at ref_point
    OperatingPoint ref_point;
    DvfsTable dvfs;

    StaticLaw static_law = StaticLaw::constant;
    double static_w = 0.21;
    double thermal_slope_w_per_c = 0.0051;
    double thermal_intercept_w = 0.0849;
    double static_voltage_exponent = 2.0;

    double t_ref_c = 23.0;
    double table_temperature_c = 23.0;
    double noise_sd_w = 0.0; // additive gaussian on power only
    std::uint64_t seed = 1;

    std::vector<BenchmarkEnvelope> benchmarks;
    std::size_t samples_per_cell = 50;

    // Thermal runs to emit: base temperature of each run at frequency zero,
    // plus how fast the equilibrium temperature climbs with frequency.
    std::vector<double> run_base_temps_c;
    double run_temp_slope_c_per_hz = 1e-8;
};

struct SynthOutput {
    MeasurementTable table;
    IdleSweep sweep;
    std::vector<ThermalRun> runs;
};

/// Static power of the generative model at a temperature.
double generator_static(const GeneratorSpec& spec, double temperature_c);

/// Noiseless forward evaluation of the generative model at one operating
/// point and temperature. This is the oracle the fitting pipeline is tested
/// against, written out independently of the prediction code.
double forward_power(const GeneratorSpec& spec, std::span<const double> rates,
                     const OperatingPoint& point, double temperature_c);

/// samples_per_cell samples per (benchmark x ladder point), an idle sweep
/// over the whole ladder, and one thermal run per requested base
/// temperature. Deterministic given the seed.
SynthOutput generate(const GeneratorSpec& spec);

/// TX1-shaped demo generator: a 13-point ladder with a 5-point
/// constant-voltage prefix, four counters, six benchmarks.
GeneratorSpec default_spec();

struct SynthSpecFile {
    GeneratorSpec gen;
    BenchmarkSplit split;
};

/// Key/value spec file (`key = value`, `#` comments, repeated `benchmark`
/// keys accumulate). Unknown keys are errors.
SynthSpecFile load_spec(const std::filesystem::path& path);
SynthSpecFile default_spec_file();

} // namespace powerscope
