#include "powerscope/synth.hpp"

#include <algorithm>
#include <cmath>

#include "powerscope/errors.hpp"
#include "powerscope/rng.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

using detail::parse_double;
using detail::parse_int64;
using detail::parse_size;
using detail::parse_uint64;
using detail::split;
using detail::trim;

// All generated samples share one window length. A power-of-two cycle count
// keeps events/cycles an exact inverse of rate*cycles, so a zero-noise
// fixture reproduces its generator bit for bit.
constexpr double kWindowCycles = 134217728.0; // 2^27

void validate(const GeneratorSpec& spec) {
    if (spec.counters.empty()) throw DataError("generator: empty counter list");
    if (spec.reference.slopes_w.size() != spec.counters.size()) {
        throw DataError("generator: " + std::to_string(spec.reference.slopes_w.size()) +
                        " slopes for " + std::to_string(spec.counters.size()) + " counters");
    }
    if (spec.dvfs.empty()) throw DataError("generator: empty dvfs table");
    if (spec.benchmarks.empty()) throw DataError("generator: no benchmarks");
    if (spec.ref_point.frequency_hz <= 0 || spec.ref_point.voltage_v <= 0.0) {
        throw DataError("generator: reference point fields must be positive");
    }
    if (spec.samples_per_cell == 0) throw DataError("generator: samples_per_cell must be >= 1");
    if (spec.noise_sd_w < 0.0) throw DataError("generator: negative noise");
    if (spec.static_w < 0.0) throw DataError("generator: negative static power");
    for (const auto& b : spec.benchmarks) {
        if (b.name.empty() || b.name.find(',') != std::string::npos) {
            throw DataError("generator: bad benchmark label '" + b.name + "'");
        }
        if (b.rates.size() != spec.counters.size()) {
            throw DataError("generator: benchmark '" + b.name + "' has " +
                            std::to_string(b.rates.size()) + " envelopes for " +
                            std::to_string(spec.counters.size()) + " counters");
        }
        for (const auto& e : b.rates) {
            if (e.min_rate < 0.0 || e.max_rate < e.min_rate) {
                throw DataError("generator: benchmark '" + b.name +
                                "' has an invalid rate envelope");
            }
        }
    }
}

} // namespace

double generator_static(const GeneratorSpec& spec, double temperature_c) {
    if (spec.static_law == StaticLaw::constant) return spec.static_w;
    return spec.thermal_slope_w_per_c * temperature_c + spec.thermal_intercept_w;
}

double forward_power(const GeneratorSpec& spec, std::span<const double> rates,
                     const OperatingPoint& point, double temperature_c) {
    if (rates.size() != spec.reference.slopes_w.size()) {
        throw DataError("forward_power: rate vector length mismatch");
    }
    double p_ref = spec.reference.intercept_w;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        p_ref += spec.reference.slopes_w[i] * rates[i];
    }
    const double static_ref = generator_static(spec, spec.t_ref_c);
    const double static_here = generator_static(spec, temperature_c);
    const double freq_ratio = static_cast<double>(point.frequency_hz) /
                              static_cast<double>(spec.ref_point.frequency_hz);
    const double volt_ratio = point.voltage_v / spec.ref_point.voltage_v;
    const double volt_sq = volt_ratio * volt_ratio;
    const double volt_static = spec.static_voltage_exponent == 2.0
                                   ? volt_sq
                                   : std::pow(volt_ratio, spec.static_voltage_exponent);
    return (p_ref - static_ref) * freq_ratio * volt_sq + static_here * volt_static;
}

SynthOutput generate(const GeneratorSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);

    SynthOutput out;
    out.table.counter_names = spec.counters;
    out.table.samples.reserve(spec.benchmarks.size() * spec.dvfs.size() * spec.samples_per_cell);

    std::vector<double> rates(spec.counters.size(), 0.0);
    for (const auto& bench : spec.benchmarks) {
        for (const auto& point : spec.dvfs.points()) {
            for (std::size_t k = 0; k < spec.samples_per_cell; ++k) {
                for (std::size_t c = 0; c < rates.size(); ++c) {
                    rates[c] = rng.uniform(bench.rates[c].min_rate, bench.rates[c].max_rate);
                }
                Sample s;
                s.benchmark = bench.name;
                s.point = point;
                s.temperature_c = spec.table_temperature_c;
                s.cycles = kWindowCycles;
                s.events.resize(rates.size());
                for (std::size_t c = 0; c < rates.size(); ++c) {
                    s.events[c] = rates[c] * kWindowCycles;
                }
                double power = forward_power(spec, rates, point, spec.table_temperature_c);
                if (spec.noise_sd_w > 0.0) power += rng.gaussian(0.0, spec.noise_sd_w);
                s.power_w = std::max(power, 0.0);
                out.table.samples.push_back(std::move(s));
            }
        }
    }

    const std::vector<double> zero_rates(spec.counters.size(), 0.0);
    for (const auto& point : spec.dvfs.points()) {
        double idle = forward_power(spec, zero_rates, point, spec.t_ref_c);
        if (spec.noise_sd_w > 0.0) idle += rng.gaussian(0.0, spec.noise_sd_w);
        out.sweep.points.push_back(
            IdleSweep::Point{point, std::max(idle, 1e-9), spec.t_ref_c});
    }

    if (!spec.run_base_temps_c.empty()) {
        const auto prefix = spec.dvfs.constant_voltage_prefix();
        if (prefix.size() < 2) {
            throw DataError("generator: thermal runs need a constant-voltage prefix of >= 2 "
                            "ladder points");
        }
        for (double base_temp : spec.run_base_temps_c) {
            ThermalRun run;
            run.voltage_v = spec.dvfs.base_voltage();
            for (const auto& point : prefix) {
                const double temp =
                    base_temp +
                    spec.run_temp_slope_c_per_hz * static_cast<double>(point.frequency_hz);
                double power = forward_power(spec, zero_rates, point, temp);
                if (spec.noise_sd_w > 0.0) power += rng.gaussian(0.0, spec.noise_sd_w);
                run.samples.push_back(
                    ThermalRun::Point{point.frequency_hz, std::max(power, 1e-9), temp});
            }
            out.runs.push_back(std::move(run));
        }
    }
    return out;
}

GeneratorSpec default_spec() {
    GeneratorSpec spec;
    spec.counters = {"inst_executed_cs", "executed_global_stores", "gpu_busy", "active_warps"};
    spec.reference.intercept_w = 0.7720;
    spec.reference.slopes_w = {0.0025, 0.0908, -0.000017, 0.000019};
    spec.ref_point = {380000000, 0.82};
    spec.dvfs = DvfsTable({{76000000, 0.82},
                           {153000000, 0.82},
                           {230000000, 0.82},
                           {307000000, 0.82},
                           {380000000, 0.82},
                           {460000000, 0.85},
                           {537000000, 0.88},
                           {614000000, 0.91},
                           {691000000, 0.94},
                           {768000000, 0.97},
                           {844000000, 1.00},
                           {921000000, 1.03},
                           {998000000, 1.07}});
    spec.static_law = StaticLaw::constant;
    spec.static_w = 0.21;
    spec.benchmarks = {
        {"backprop", {{100, 400}, {1, 6}, {100, 900}, {8, 48}}},
        {"bfs", {{20, 150}, {2, 9}, {50, 600}, {4, 32}}},
        {"hotspot", {{250, 700}, {1, 7}, {400, 2000}, {16, 64}}},
        {"kmeans", {{80, 450}, {3, 12}, {200, 1500}, {8, 56}}},
        {"nbody", {{150, 600}, {0, 4}, {300, 2500}, {24, 64}}},
        {"blackscholes", {{50, 300}, {4, 11}, {80, 800}, {4, 40}}},
    };
    return spec;
}

SynthSpecFile default_spec_file() {
    SynthSpecFile file;
    file.gen = default_spec();
    file.split.train = {"backprop", "bfs", "hotspot", "kmeans"};
    file.split.test = {"nbody", "blackscholes"};
    return file;
}

namespace {

std::vector<double> parse_double_list(const std::string& value, const std::string& key,
                                      const std::filesystem::path& path) {
    std::vector<double> out;
    for (const auto& piece : split(value, ',')) {
        if (trim(piece).empty()) continue;
        double v = 0.0;
        if (!parse_double(piece, v)) {
            throw DataError(path.string() + ": bad number '" + std::string(trim(piece)) +
                            "' in key '" + key + "'");
        }
        out.push_back(v);
    }
    return out;
}

// benchmark = <name> <min>:<max> <min>:<max> ...
BenchmarkEnvelope parse_benchmark(const std::string& value, const std::filesystem::path& path) {
    auto fields = split(value, ' ');
    std::erase_if(fields, [](const std::string& f) { return trim(f).empty(); });
    if (fields.size() < 2) {
        throw DataError(path.string() + ": benchmark entry needs a name and one envelope "
                        "per counter");
    }
    BenchmarkEnvelope bench;
    bench.name = std::string(trim(fields[0]));
    for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto parts = split(fields[i], ':');
        double lo = 0.0, hi = 0.0;
        if (parts.size() != 2 || !parse_double(parts[0], lo) || !parse_double(parts[1], hi)) {
            throw DataError(path.string() + ": bad envelope '" + fields[i] + "' for benchmark '" +
                            bench.name + "' (want min:max)");
        }
        bench.rates.push_back(RateEnvelope{lo, hi});
    }
    return bench;
}

} // namespace

SynthSpecFile load_spec(const std::filesystem::path& path) {
    SynthSpecFile file = default_spec_file();
    GeneratorSpec& gen = file.gen;
    bool benchmarks_cleared = false;
    bool split_cleared = false;

    std::size_t line_no = 0;
    for (const auto& raw : detail::read_lines(path)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw DataError(path.string() + ", line " + std::to_string(line_no) +
                            ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        auto bad = [&](const std::string& why) -> DataError {
            return DataError(path.string() + ", line " + std::to_string(line_no) + ": " + why);
        };

        if (key == "counters") {
            gen.counters.clear();
            for (const auto& c : split(value, ',')) {
                if (!trim(c).empty()) gen.counters.emplace_back(trim(c));
            }
        } else if (key == "intercept_w") {
            if (!parse_double(value, gen.reference.intercept_w)) throw bad("bad intercept_w");
        } else if (key == "slopes_w") {
            gen.reference.slopes_w = parse_double_list(value, key, path);
        } else if (key == "ref_freq_hz") {
            if (!parse_int64(value, gen.ref_point.frequency_hz)) throw bad("bad ref_freq_hz");
        } else if (key == "ref_volt_v") {
            if (!parse_double(value, gen.ref_point.voltage_v)) throw bad("bad ref_volt_v");
        } else if (key == "dvfs") {
            std::vector<OperatingPoint> points;
            for (const auto& entry : split(value, ',')) {
                if (trim(entry).empty()) continue;
                const auto parts = split(entry, ':');
                OperatingPoint p;
                if (parts.size() != 2 || !parse_int64(parts[0], p.frequency_hz) ||
                    !parse_double(parts[1], p.voltage_v)) {
                    throw bad("bad dvfs entry '" + entry + "' (want freq_hz:volt_v)");
                }
                points.push_back(p);
            }
            gen.dvfs = DvfsTable(std::move(points));
        } else if (key == "static_law") {
            if (value == "constant") gen.static_law = StaticLaw::constant;
            else if (value == "thermal_line") gen.static_law = StaticLaw::thermal_line;
            else throw bad("static_law must be 'constant' or 'thermal_line'");
        } else if (key == "static_w") {
            if (!parse_double(value, gen.static_w)) throw bad("bad static_w");
        } else if (key == "thermal_slope_w_per_c") {
            if (!parse_double(value, gen.thermal_slope_w_per_c)) throw bad("bad thermal slope");
        } else if (key == "thermal_intercept_w") {
            if (!parse_double(value, gen.thermal_intercept_w)) throw bad("bad thermal intercept");
        } else if (key == "static_vexp") {
            if (!parse_double(value, gen.static_voltage_exponent)) throw bad("bad static_vexp");
        } else if (key == "t_ref_c") {
            if (!parse_double(value, gen.t_ref_c)) throw bad("bad t_ref_c");
        } else if (key == "table_temp_c") {
            if (!parse_double(value, gen.table_temperature_c)) throw bad("bad table_temp_c");
        } else if (key == "noise_sd_w") {
            if (!parse_double(value, gen.noise_sd_w)) throw bad("bad noise_sd_w");
        } else if (key == "seed") {
            if (!parse_uint64(value, gen.seed)) throw bad("bad seed");
        } else if (key == "samples_per_cell") {
            if (!parse_size(value, gen.samples_per_cell)) throw bad("bad samples_per_cell");
        } else if (key == "benchmark") {
            if (!benchmarks_cleared) {
                gen.benchmarks.clear();
                benchmarks_cleared = true;
            }
            gen.benchmarks.push_back(parse_benchmark(value, path));
        } else if (key == "train" || key == "test") {
            if (!split_cleared) {
                file.split = {};
                split_cleared = true;
            }
            auto& section = key == "train" ? file.split.train : file.split.test;
            for (const auto& b : split(value, ',')) {
                if (!trim(b).empty()) section.emplace(trim(b));
            }
        } else if (key == "run_temps_c") {
            gen.run_base_temps_c = parse_double_list(value, key, path);
        } else if (key == "run_temp_slope_c_per_hz") {
            if (!parse_double(value, gen.run_temp_slope_c_per_hz)) throw bad("bad run slope");
        } else {
            throw bad("unknown key '" + key + "'");
        }
    }

    for (const auto& b : file.split.train) {
        if (file.split.test.count(b)) {
            throw DataError(path.string() + ": benchmark '" + b + "' in both train and test");
        }
    }
    return file;
}

} // namespace powerscope
