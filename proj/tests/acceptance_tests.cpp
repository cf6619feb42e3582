// Acceptance suite: one pass/fail line per criterion. Expected values are
// computed from explicit generator arithmetic inside each criterion, never
// from the code path under test. Takes the CLI binary as argv[1].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "powerscope/dataset.hpp"
#include "powerscope/perfreq.hpp"
#include "powerscope/regress.hpp"
#include "powerscope/rng.hpp"
#include "powerscope/select.hpp"
#include "powerscope/synth.hpp"
#include "powerscope/thermal.hpp"
#include "powerscope/unified.hpp"

namespace fs = std::filesystem;
using namespace powerscope;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_binary;

struct Checker {
    bool passed = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            passed = false;
            notes.push_back(what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

// The demo generator's ladder: 13 points, 5-point constant-voltage prefix.
const GeneratorSpec kDemo = default_spec();

// Four training benchmarks mixing near-idle and heavy phases, so pooled
// per-point designs carry both spread and low-rate mass.
std::vector<BenchmarkEnvelope> wide_envelopes() {
    return {
        {"near_idle", {{0, 100}, {0, 4}, {0, 100}, {0, 8}}},
        {"heavy", {{500, 3000}, {20, 60}, {500, 2500}, {32, 64}}},
        {"mid", {{200, 1500}, {5, 30}, {200, 1200}, {8, 48}}},
        {"store_heavy", {{0, 600}, {30, 60}, {0, 600}, {0, 32}}},
    };
}

BenchmarkSplit wide_split() {
    return BenchmarkSplit{{"near_idle", "heavy", "mid", "store_heavy"}, {}};
}

// Forward coefficients of the generator at one ladder point, written out
// independently of the library's scaling code.
struct PointTruth {
    double intercept;
    std::vector<double> slopes;
};

PointTruth scaled_truth(const GeneratorSpec& spec, const OperatingPoint& p) {
    const double fr = static_cast<double>(p.frequency_hz) /
                      static_cast<double>(spec.ref_point.frequency_hz);
    const double vr = p.voltage_v / spec.ref_point.voltage_v;
    const double vr2 = vr * vr;
    PointTruth t;
    t.intercept = (spec.reference.intercept_w - spec.static_w) * fr * vr2 +
                  spec.static_w * vr2;
    for (double a : spec.reference.slopes_w) t.slopes.push_back(a * fr * vr2);
    return t;
}

int run_cli(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// 1. OLS recovery against the generator's per-point forward coefficients.

void criterion_1(Checker& c) {
    const auto t0 = Clock::now();

    GeneratorSpec spec = kDemo;
    spec.benchmarks = wide_envelopes();
    spec.samples_per_cell = 50; // 200 training samples per ladder point
    spec.seed = 61;
    const BenchmarkSplit split = wide_split();

    // Noiseless: every parameter at every point within 1e-8 relative.
    const SynthOutput clean = generate(spec);
    const PerFreqModel exact = fit_per_freq(clean.table, split, spec.dvfs, spec.counters);
    double worst_rel = 0.0;
    for (const auto& p : spec.dvfs.points()) {
        const PointTruth truth = scaled_truth(spec, p);
        const Coefficients& got = exact.entries.at(p);
        worst_rel = std::max(worst_rel, std::abs(got.intercept_w - truth.intercept) /
                                            std::abs(truth.intercept));
        for (std::size_t j = 0; j < truth.slopes.size(); ++j) {
            worst_rel = std::max(worst_rel, std::abs(got.slopes_w[j] - truth.slopes[j]) /
                                                std::abs(truth.slopes[j]));
        }
    }
    c.expect(worst_rel <= 1e-8,
             "noiseless recovery misses 1e-8 (worst " + fmt(worst_rel) + ")");
    c.note("noiseless worst rel err " + fmt(worst_rel));

    // Noisy: intercept and the two largest slopes within 5 % at every point.
    GeneratorSpec noisy_spec = spec;
    noisy_spec.noise_sd_w = 0.05;
    const SynthOutput noisy = generate(noisy_spec);
    const PerFreqModel rough = fit_per_freq(noisy.table, split, spec.dvfs, spec.counters);
    double worst_noisy = 0.0;
    for (const auto& p : spec.dvfs.points()) {
        const PointTruth truth = scaled_truth(spec, p);
        const Coefficients& got = rough.entries.at(p);
        worst_noisy = std::max(worst_noisy, std::abs(got.intercept_w - truth.intercept) /
                                                std::abs(truth.intercept));
        for (std::size_t j : {std::size_t{1}, std::size_t{0}}) { // stores, inst
            worst_noisy = std::max(worst_noisy, std::abs(got.slopes_w[j] - truth.slopes[j]) /
                                                    std::abs(truth.slopes[j]));
        }
    }
    c.expect(worst_noisy <= 0.05,
             "noisy recovery misses 5 % (worst " + fmt(100.0 * worst_noisy) + " %)");
    c.note("noisy worst rel err " + fmt(100.0 * worst_noisy) + " %");

    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(seconds < 5.0, "runtime " + fmt(seconds) + " s exceeds 5 s");
    c.note(fmt(seconds) + " s");
}

// ---------------------------------------------------------------------------
// 2. Bottom-up search picks exactly the true counters; exhaustive agrees.

void criterion_2(Checker& c) {
    const auto t0 = Clock::now();

    // 4 true + 4 pure-noise candidates, interleaved in the candidate list.
    GeneratorSpec spec = kDemo;
    spec.counters = {"noise_a", "inst_executed_cs", "noise_b", "executed_global_stores",
                     "noise_c", "gpu_busy", "noise_d", "active_warps"};
    spec.reference.slopes_w = {0.0, 0.0025, 0.0, 0.0908, 0.0, -0.000017, 0.0, 0.000019};
    spec.benchmarks = {
        {"near_idle",
         {{0, 800}, {0, 100}, {0, 40}, {0, 4}, {0, 1500}, {0, 100}, {0, 50}, {0, 8}}},
        {"heavy",
         {{0, 800}, {500, 3000}, {0, 40}, {20, 60}, {0, 1500}, {500, 2500}, {0, 50}, {32, 64}}},
        {"mid",
         {{0, 800}, {200, 1500}, {0, 40}, {5, 30}, {0, 1500}, {200, 1200}, {0, 50}, {8, 48}}},
        {"store_heavy",
         {{0, 800}, {0, 600}, {0, 40}, {30, 60}, {0, 1500}, {0, 600}, {0, 50}, {0, 32}}},
    };
    spec.samples_per_cell = 50;
    spec.seed = 62;
    const SynthOutput data = generate(spec);

    SearchConfig cfg;
    cfg.mode = SearchMode::bottom_up;
    cfg.max_counters = 4;
    cfg.candidate_counters = spec.counters;
    const SearchResult picked = search(data.table, wide_split(), spec.dvfs, cfg);

    const std::set<std::string> chosen(picked.chosen_counters.begin(),
                                       picked.chosen_counters.end());
    const std::set<std::string> truth{"inst_executed_cs", "executed_global_stores", "gpu_busy",
                                      "active_warps"};
    c.expect(chosen == truth, "bottom-up picked {" + [&] {
        std::string s;
        for (const auto& n : chosen) s += n + " ";
        return s;
    }() + "} instead of the four true counters");

    // 6-candidate fixture: exhaustive over pairs agrees with the greedy
    // search's first two picks.
    GeneratorSpec two = kDemo;
    two.counters = {"n1", "inst", "n2", "stores", "n3", "n4"};
    two.reference.slopes_w = {0.0, 0.0025, 0.0, 0.0908, 0.0, 0.0};
    two.benchmarks = {
        {"near_idle", {{0, 800}, {0, 100}, {0, 40}, {0, 4}, {0, 1500}, {0, 50}}},
        {"heavy", {{0, 800}, {500, 3000}, {0, 40}, {20, 60}, {0, 1500}, {0, 50}}},
        {"mid", {{0, 800}, {200, 1500}, {0, 40}, {5, 30}, {0, 1500}, {0, 50}}},
        {"store_heavy", {{0, 800}, {0, 600}, {0, 40}, {30, 60}, {0, 1500}, {0, 50}}},
    };
    two.samples_per_cell = 50;
    two.seed = 63;
    const SynthOutput pair_data = generate(two);

    SearchConfig greedy_cfg;
    greedy_cfg.mode = SearchMode::bottom_up;
    greedy_cfg.max_counters = 2;
    greedy_cfg.candidate_counters = two.counters;
    const SearchResult greedy = search(pair_data.table, wide_split(), two.dvfs, greedy_cfg);

    SearchConfig global_cfg = greedy_cfg;
    global_cfg.mode = SearchMode::exhaustive;
    const SearchResult global = search(pair_data.table, wide_split(), two.dvfs, global_cfg);

    const std::set<std::string> greedy_set(greedy.chosen_counters.begin(),
                                           greedy.chosen_counters.end());
    const std::set<std::string> global_set(global.chosen_counters.begin(),
                                           global.chosen_counters.end());
    c.expect(greedy_set == std::set<std::string>{"inst", "stores"},
             "greedy pair is not the two informative counters");
    c.expect(global_set == greedy_set, "exhaustive disagrees with the greedy pair");

    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(seconds < 30.0, "runtime " + fmt(seconds) + " s exceeds 30 s");
    c.note(fmt(seconds) + " s");
}

// ---------------------------------------------------------------------------
// 3. Static power from a constant-voltage idle sweep through 0.21 W.

void criterion_3(Checker& c) {
    const std::vector<std::int64_t> freqs{76000000, 153000000, 230000000, 307000000, 380000000};
    const double slope = 1.5e-9;

    IdleSweep clean;
    for (std::int64_t f : freqs) {
        clean.points.push_back({{f, 0.82}, 0.21 + slope * static_cast<double>(f), 23.0});
    }
    const StaticPowerEstimate exact = estimate_static_zero_freq(clean, 0.82);
    c.expect(std::abs(exact.static_w - 0.21) <= 1e-9,
             "noiseless intercept off by " + fmt(std::abs(exact.static_w - 0.21)));

    Rng rng(14);
    IdleSweep noisy;
    for (std::int64_t f : freqs) {
        noisy.points.push_back(
            {{f, 0.82}, 0.21 + slope * static_cast<double>(f) + rng.gaussian(0.0, 0.01), 23.0});
    }
    const StaticPowerEstimate rough = estimate_static_zero_freq(noisy, 0.82);
    const double rel = std::abs(rough.static_w - 0.21) / 0.21;
    c.expect(rel <= 0.05, "noisy intercept off by " + fmt(100.0 * rel) + " %");
    c.note("noisy estimate " + fmt(rough.static_w) + " W (" + fmt(100.0 * rel) + " % off)");
}

// ---------------------------------------------------------------------------
// 4. At its anchor the unified model equals the per-frequency model.

void criterion_4(Checker& c) {
    GeneratorSpec spec = kDemo;
    spec.benchmarks = wide_envelopes();
    spec.samples_per_cell = 10;
    spec.seed = 64;
    const SynthOutput data = generate(spec);
    const PerFreqModel pf = fit_per_freq(data.table, wide_split(), spec.dvfs, spec.counters);

    Rng rng(65);
    for (Anchor anchor : {Anchor::UAL, Anchor::UAM, Anchor::UAH}) {
        const UnifiedModel u = build_unified(pf, anchor, data.sweep, spec.dvfs);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Sample s;
            s.point = u.ref_point;
            s.cycles = 1.0;
            for (int j = 0; j < 4; ++j) s.events.push_back(rng.uniform(0.0, 2500.0));
            const double unified = predict_unified(u, spec.counters, s);
            const double per_freq = predict_power(pf, spec.counters, s);
            worst = std::max(worst, std::abs(unified - per_freq));
        }
        c.expect(worst <= 1e-12,
                 to_string(anchor) + " anchor identity off by " + fmt(worst));
        c.note(to_string(anchor) + " worst |diff| " + fmt(worst));
    }
}

// ---------------------------------------------------------------------------
// 5. Unified accuracy: UAM stays under 5 % on noisy data; perturbed UAL/UAH
//    degrade monotonically away from their anchors.

void criterion_5(Checker& c) {
    GeneratorSpec spec = kDemo;
    spec.benchmarks = wide_envelopes();
    spec.samples_per_cell = 50;
    spec.seed = 66;

    Rng noise(660);
    auto with_mult_noise = [&](MeasurementTable table) {
        for (auto& s : table.samples) {
            s.power_w = std::max(s.power_w * (1.0 + noise.gaussian(0.0, 0.03)), 1e-5);
        }
        return table;
    };

    // UAM is judged end to end, so its per-frequency model is fitted on the
    // noisy training data. The trend models below isolate the static-power
    // perturbation instead and take their reference from a clean fit;
    // otherwise reference-coefficient noise of the same magnitude as the
    // far-anchor bias deltas would wash the per-point ordering out.
    const SynthOutput train = generate(spec);
    const MeasurementTable noisy_train = with_mult_noise(train.table);
    const PerFreqModel pf = fit_per_freq(noisy_train, wide_split(), spec.dvfs, spec.counters);
    const PerFreqModel pf_clean = fit_per_freq(train.table, wide_split(), spec.dvfs, spec.counters);

    // Evaluation tables share one rate draw across all ladder points, so
    // per-point error differences come from the model, not the sampling.
    Rng rates_rng(661);
    MeasurementTable eval;
    eval.counter_names = spec.counters;
    const std::vector<BenchmarkEnvelope> test_envelopes{
        {"hold_a", {{50, 2000}, {2, 40}, {100, 1800}, {4, 56}}},
        {"hold_b", {{0, 900}, {10, 55}, {0, 900}, {0, 40}}},
    };
    for (const auto& bench : test_envelopes) {
        std::vector<std::vector<double>> draws;
        for (int i = 0; i < 600; ++i) {
            std::vector<double> r;
            for (const auto& env : bench.rates) {
                r.push_back(rates_rng.uniform(env.min_rate, env.max_rate));
            }
            draws.push_back(std::move(r));
        }
        for (const auto& p : spec.dvfs.points()) {
            for (const auto& r : draws) {
                Sample s;
                s.benchmark = bench.name;
                s.point = p;
                s.cycles = 134217728.0;
                for (double v : r) s.events.push_back(v * s.cycles);
                s.power_w = forward_power(spec, r, p, spec.t_ref_c);
                eval.samples.push_back(std::move(s));
            }
        }
    }
    const MeasurementTable noisy_eval = with_mult_noise(eval);

    const UnifiedModel uam = build_unified(pf, Anchor::UAM, train.sweep, spec.dvfs);
    const FitReport uam_report = evaluate_unified(uam, noisy_eval, std::nullopt);
    c.expect(uam_report.overall_pct <= 5.0,
             "UAM overall " + fmt(uam_report.overall_pct) + " % exceeds 5 %");
    c.note("UAM overall " + fmt(uam_report.overall_pct) + " % on noisy data");

    // +25 % static perturbation; error must grow strictly with anchor
    // distance on the noise-free evaluation table.
    auto perturbed = [&](Anchor anchor) {
        UnifiedModel u = build_unified(pf_clean, anchor, train.sweep, spec.dvfs);
        u.static_w *= 1.25;
        return evaluate_unified(u, eval, std::nullopt);
    };

    const FitReport ual = perturbed(Anchor::UAL);
    std::vector<double> ual_errors;
    for (const auto& [point, stats] : ual.per_point) ual_errors.push_back(stats.mape_pct);
    bool ual_monotone = ual_errors.size() == spec.dvfs.size();
    for (std::size_t i = 1; i < ual_errors.size(); ++i) {
        if (ual_errors[i] <= ual_errors[i - 1]) ual_monotone = false;
    }
    c.expect(ual_monotone, "UAL error is not strictly increasing away from the low anchor");
    c.note("UAL per-point " + fmt(ual_errors.front()) + " % -> " + fmt(ual_errors.back()) +
           " %");

    const FitReport uah = perturbed(Anchor::UAH);
    std::vector<double> uah_errors;
    for (const auto& [point, stats] : uah.per_point) uah_errors.push_back(stats.mape_pct);
    bool uah_monotone = uah_errors.size() == spec.dvfs.size();
    for (std::size_t i = 1; i < uah_errors.size(); ++i) {
        if (uah_errors[i] >= uah_errors[i - 1]) uah_monotone = false;
    }
    c.expect(uah_monotone, "UAH error is not strictly increasing away from the high anchor");
    c.note("UAH per-point " + fmt(uah_errors.front()) + " % -> " + fmt(uah_errors.back()) +
           " %");
}

// ---------------------------------------------------------------------------
// 6. Thermal law recovery and the T_ref reduction.

void criterion_6(Checker& c) {
    const double law_slope = 0.0051;
    const double law_icpt = 0.0849;

    auto exact_run = [&](double base_temp, double power_slope, double temp_slope) {
        ThermalRun run;
        run.voltage_v = 0.82;
        for (std::int64_t f : {76000000, 153000000, 230000000, 307000000, 380000000}) {
            const double fd = static_cast<double>(f);
            run.samples.push_back(ThermalRun::Point{
                f, (law_slope * base_temp + law_icpt) + power_slope * fd,
                base_temp + temp_slope * fd});
        }
        return run;
    };
    const std::vector<ThermalRun> runs{exact_run(23.0, 1.2e-9, 1e-8),
                                       exact_run(50.0, 1.5e-9, 2e-8)};
    const ThermalStaticModel tm = fit_thermal_static(runs);
    c.expect(std::abs(tm.slope_w_per_c - law_slope) <= 1e-9,
             "slope off by " + fmt(std::abs(tm.slope_w_per_c - law_slope)));
    c.expect(std::abs(tm.intercept_w - law_icpt) <= 1e-9,
             "intercept off by " + fmt(std::abs(tm.intercept_w - law_icpt)));
    c.note("slope " + fmt(tm.slope_w_per_c) + " W/C, intercept " + fmt(tm.intercept_w) + " W");

    // At T_ref the temperature-aware prediction reduces to the plain one.
    UnifiedModel u;
    u.counters = kDemo.counters;
    u.reference = kDemo.reference;
    u.ref_point = kDemo.ref_point;
    u.t_ref_c = 23.0;
    UnifiedModel plain = u;
    plain.static_w = static_at(tm, 23.0);

    Rng rng(67);
    double worst = 0.0;
    for (const auto& p : kDemo.dvfs.points()) {
        for (int i = 0; i < 50; ++i) {
            Sample s;
            s.point = p;
            s.temperature_c = 23.0;
            s.cycles = 1.0;
            for (int j = 0; j < 4; ++j) s.events.push_back(rng.uniform(0.0, 2000.0));
            const double thermal_pred = predict_unified_thermal(u, tm, kDemo.counters, s);
            const double plain_pred = predict_unified(plain, kDemo.counters, s);
            worst = std::max(worst, std::abs(thermal_pred - plain_pred));
        }
    }
    c.expect(worst <= 1e-12, "T_ref reduction off by " + fmt(worst));
    c.note("T_ref reduction worst |diff| " + fmt(worst));
}

// ---------------------------------------------------------------------------
// 7. Temperature sensitivity at a low-power operating point.

void criterion_7(Checker& c) {
    GeneratorSpec spec = kDemo;
    spec.static_law = StaticLaw::thermal_line; // slope 0.0051, intercept 0.0849
    const ThermalStaticModel tm{spec.thermal_slope_w_per_c, spec.thermal_intercept_w, 0.82,
                                23.0, 63.0};

    UnifiedModel thermal_model;
    thermal_model.counters = spec.counters;
    thermal_model.reference = spec.reference;
    thermal_model.ref_point = spec.ref_point;
    thermal_model.t_ref_c = spec.t_ref_c;
    thermal_model.static_w = static_at(tm, spec.t_ref_c);
    thermal_model.thermal = tm;

    UnifiedModel blind = thermal_model;
    blind.thermal.reset();

    const OperatingPoint low{76000000, 0.82};

    // Heating an idle-ish sample by 40 C moves the prediction by > 20 %.
    Sample idle;
    idle.point = low;
    idle.cycles = 1.0;
    idle.events.assign(4, 0.0);
    idle.temperature_c = 23.0;
    const double cold = predict_unified_thermal(thermal_model, tm, spec.counters, idle);
    idle.temperature_c = 63.0;
    const double hot = predict_unified_thermal(thermal_model, tm, spec.counters, idle);
    const double swing = (hot - cold) / cold;
    c.expect(swing > 0.20, "40 C swing is only " + fmt(100.0 * swing) + " %");
    c.note("40 C heats the idle prediction by " + fmt(100.0 * swing) + " %");

    // Hot trace at the same point: the temperature-blind model must trail
    // the thermal one by at least 10 percentage points.
    Rng rng(70);
    MeasurementTable hot_table;
    hot_table.counter_names = spec.counters;
    const std::vector<RateEnvelope> low_rates{{0, 20}, {0, 1}, {0, 50}, {0, 4}};
    for (int i = 0; i < 200; ++i) {
        Sample s;
        s.benchmark = "hot";
        s.point = low;
        s.temperature_c = 63.0;
        s.cycles = 134217728.0;
        std::vector<double> r;
        for (const auto& env : low_rates) r.push_back(rng.uniform(env.min_rate, env.max_rate));
        for (double v : r) s.events.push_back(v * s.cycles);
        s.power_w = forward_power(spec, r, low, 63.0);
        hot_table.samples.push_back(std::move(s));
    }
    const FitReport blind_report = evaluate_unified(blind, hot_table, std::nullopt);
    const FitReport thermal_report = evaluate_unified(thermal_model, hot_table, std::nullopt);
    const double gap = blind_report.overall_pct - thermal_report.overall_pct;
    c.expect(gap >= 10.0, "hot-trace gap is only " + fmt(gap) + " points");
    c.note("blind " + fmt(blind_report.overall_pct) + " % vs thermal " +
           fmt(thermal_report.overall_pct) + " % on the hot trace");
}

// ---------------------------------------------------------------------------
// 8. Round-trips: model files, emitted CSVs, fixed-seed byte identity.

void criterion_8(Checker& c) {
    const fs::path dir =
        fs::temp_directory_path() / ("powerscope_acc8_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string d = dir.string();

    GeneratorSpec spec = kDemo;
    spec.benchmarks = wide_envelopes();
    spec.samples_per_cell = 10;
    spec.noise_sd_w = 0.02;
    spec.seed = 68;
    const SynthOutput data = generate(spec);

    const PerFreqModel pf = fit_per_freq(data.table, wide_split(), spec.dvfs, spec.counters);
    save_pfm(pf, dir / "m.pfm");
    const PerFreqModel pf_rt = load_pfm(dir / "m.pfm");
    c.expect(pf_rt.entries == pf.entries && pf_rt.counters == pf.counters,
             ".pfm round-trip is not bit-identical");
    save_pfm(pf_rt, dir / "m2.pfm");
    c.expect(slurp(dir / "m.pfm") == slurp(dir / "m2.pfm"), ".pfm re-save differs");

    UnifiedModel u = build_unified(pf, Anchor::UAM, data.sweep, spec.dvfs);
    u.thermal = ThermalStaticModel{0.0051, 0.0849, 0.82, 23.0, 57.0};
    save_ufm(u, dir / "m.ufm");
    const UnifiedModel u_rt = load_ufm(dir / "m.ufm");
    c.expect(u_rt.reference == u.reference && u_rt.static_w == u.static_w &&
                 u_rt.thermal == u.thermal && u_rt.ref_point == u.ref_point,
             ".ufm round-trip is not bit-identical");
    save_ufm(u_rt, dir / "m2.ufm");
    c.expect(slurp(dir / "m.ufm") == slurp(dir / "m2.ufm"), ".ufm re-save differs");

    // Full CLI pipeline; every emitted CSV must re-parse.
    std::ofstream(dir / "spec.txt") << "static_law = thermal_line\n"
                                       "run_temps_c = 23, 40, 57\n"
                                       "samples_per_cell = 15\n"
                                       "seed = 81\n";
    c.expect(run_cli("synth --spec " + d + "/spec.txt --out-dir " + d + "/fx") == 0,
             "cli synth failed");
    c.expect(run_cli("synth --spec " + d + "/spec.txt --out-dir " + d + "/fx2") == 0,
             "cli synth rerun failed");
    c.expect(slurp(dir / "fx/measurements.csv") == slurp(dir / "fx2/measurements.csv"),
             "fixed-seed synth runs are not byte-identical");

    c.expect(run_cli("search -r " + d + "/fx/measurements.csv -b " + d + "/fx/split.txt -f " +
                     d + "/fx/dvfs.csv --out-dir " + d + "/md") == 0,
             "cli search failed");
    c.expect(run_cli("unify --pfm " + d + "/md/model.pfm -f " + d +
                     "/fx/dvfs.csv --idle-sweep " + d + "/fx/idle_sweep.csv -o " + d +
                     "/md/model.ufm") == 0,
             "cli unify failed");
    c.expect(run_cli("thermal --ufm " + d + "/md/model.ufm --runs " + d +
                     "/fx/thermal_run_1.csv " + d + "/fx/thermal_run_2.csv " + d +
                     "/fx/thermal_run_3.csv") == 0,
             "cli thermal failed");
    c.expect(run_cli("predict --model " + d + "/md/model.ufm -r " + d +
                     "/fx/measurements.csv -b " + d + "/fx/split.txt --out-dir " + d +
                     "/pr") == 0,
             "cli predict failed");

    std::size_t csv_count = 0;
    try {
        for (const auto& sub : {"fx", "md", "pr"}) {
            for (const auto& entry : fs::directory_iterator(dir / sub)) {
                if (entry.path().extension() == ".csv") {
                    read_csv(entry.path());
                    ++csv_count;
                }
            }
        }
        load_measurements(dir / "fx/measurements.csv");
        load_dvfs(dir / "fx/dvfs.csv");
        load_split(dir / "fx/split.txt");
        load_idle_sweep(dir / "fx/idle_sweep.csv");
        load_thermal_run(dir / "fx/thermal_run_1.csv");
    } catch (const std::exception& e) {
        c.expect(false, std::string("emitted file failed to re-parse: ") + e.what());
    }
    c.note(std::to_string(csv_count) + " emitted CSVs re-parsed");

    const SynthOutput again = generate(spec);
    c.expect(again.table == data.table, "library generate() is not deterministic");

    std::error_code ec;
    fs::remove_all(dir, ec);
}

// ---------------------------------------------------------------------------
// 9. Frequency-linearity and voltage-square laws over random draws.

void criterion_9(Checker& c) {
    Rng rng(69);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const double p_ref = rng.uniform(0.3, 15.0);
        const double stat = rng.uniform(0.0, std::min(p_ref, 1.0));
        const OperatingPoint ref{static_cast<std::int64_t>(rng.uniform(5e7, 1.2e9)),
                                 rng.uniform(0.6, 1.3)};
        const std::int64_t f1 = static_cast<std::int64_t>(rng.uniform(5e7, 1.2e9));
        const std::int64_t f2 = static_cast<std::int64_t>(rng.uniform(5e7, 1.2e9));
        const double volt = rng.uniform(0.6, 1.3);

        const double vr = volt / ref.voltage_v;
        const double static_term = stat * vr * vr;
        const double at_f1 = scale_power(p_ref, stat, ref, {f1, volt});
        const double at_f2 = scale_power(p_ref, stat, ref, {f2, volt});
        const double lhs = at_f2 - static_term;
        const double rhs =
            (static_cast<double>(f2) / static_cast<double>(f1)) * (at_f1 - static_term);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));

        const double v1 = rng.uniform(0.6, 1.3);
        const double v2 = rng.uniform(0.6, 1.3);
        const double r1 = v1 / ref.voltage_v;
        const double r2 = v2 / ref.voltage_v;
        const double n1 = scale_power(p_ref, stat, ref, {f1, v1}) / (r1 * r1);
        const double n2 = scale_power(p_ref, stat, ref, {f1, v2}) / (r2 * r2);
        worst = std::max(worst, std::abs(n1 - n2) / std::max(1.0, std::abs(n1)));
    }
    c.expect(worst <= 1e-12, "scaling law deviation " + fmt(worst));
    c.note("worst deviation " + fmt(worst) + " over 10000 draws");
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance_tests <path-to-powerscope-binary>\n";
        return 2;
    }
    g_binary = fs::absolute(argv[1]).string();

    struct Entry {
        int id;
        const char* name;
        std::function<void(Checker&)> fn;
    };
    const std::vector<Entry> criteria{
        {1, "OLS recovery of the generator coefficients", criterion_1},
        {2, "bottom-up and exhaustive counter search", criterion_2},
        {3, "static power extraction from an idle sweep", criterion_3},
        {4, "anchor identity of the unified model", criterion_4},
        {5, "unified model accuracy and anchor-distance degradation", criterion_5},
        {6, "thermal law fit and T_ref reduction", criterion_6},
        {7, "temperature sensitivity on a low-power point", criterion_7},
        {8, "model file, CSV and fixed-seed round-trips", criterion_8},
        {9, "frequency-linearity and voltage-square scaling laws", criterion_9},
    };

    int failed = 0;
    for (const auto& entry : criteria) {
        Checker checker;
        try {
            entry.fn(checker);
        } catch (const std::exception& e) {
            checker.passed = false;
            checker.notes.push_back(std::string("exception: ") + e.what());
        }
        std::ostringstream line;
        line << (checker.passed ? "[PASS]" : "[FAIL]") << " criterion " << entry.id << ": "
             << entry.name;
        if (!checker.notes.empty()) {
            line << " (";
            for (std::size_t i = 0; i < checker.notes.size(); ++i) {
                line << (i ? "; " : "") << checker.notes[i];
            }
            line << ")";
        }
        std::cout << line.str() << "\n";
        if (!checker.passed) ++failed;
    }

    if (failed > 0) {
        std::cout << failed << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 9 criteria passed\n";
    return 0;
}
