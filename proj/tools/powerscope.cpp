// powerscope: train, evaluate and serialize counter-based power models for
// DVFS-capable accelerators. Subcommands: search, unify, thermal, predict,
// synth. Exit codes: 0 ok, 1 usage, 2 data error, 3 numeric failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "powerscope/dataset.hpp"
#include "powerscope/errors.hpp"
#include "powerscope/perfreq.hpp"
#include "powerscope/report.hpp"
#include "powerscope/select.hpp"
#include "powerscope/synth.hpp"
#include "powerscope/thermal.hpp"
#include "powerscope/unified.hpp"

namespace fs = std::filesystem;
using namespace powerscope;

namespace {

std::string full(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::string human(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

std::string join(const std::vector<std::string>& names, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += sep;
        out += names[i];
    }
    return out;
}

MeasurementTable load_table(const fs::path& path, std::size_t power_column,
                            std::vector<std::size_t> counter_columns) {
    if (counter_columns.empty()) {
        const CsvFile csv = read_csv(path);
        for (std::size_t c = kCanonicalFirstCounterColumn; c <= csv.header.size(); ++c) {
            counter_columns.push_back(c);
        }
        if (counter_columns.empty()) {
            throw DataError(path.string() + ": no counter columns after column " +
                            std::to_string(kCanonicalFirstCounterColumn - 1));
        }
    }
    return load_measurements(path, power_column, counter_columns);
}

std::optional<std::set<std::string>> subset_filter(const BenchmarkSplit& split,
                                                   const std::string& subset) {
    if (subset == "train") return split.train;
    if (subset == "test") return split.test;
    return std::nullopt; // all
}

// ---------------------------------------------------------------- search --

struct SearchOpts {
    std::string measurements;
    std::string split_file;
    std::string dvfs_file;
    std::size_t power_column = kCanonicalPowerColumn;
    std::vector<std::size_t> counter_columns;
    std::vector<std::size_t> fixed_columns;
    int mode = 1;
    std::size_t max_counters = 4;
    int criterion = 1;
    std::string out_dir = ".";
};

void run_search(const SearchOpts& opts) {
    const bool fixed = !opts.fixed_columns.empty();
    const auto& columns = fixed ? opts.fixed_columns : opts.counter_columns;
    const MeasurementTable table = load_table(opts.measurements, opts.power_column, columns);
    const BenchmarkSplit split = load_split(opts.split_file);
    if (split.train.empty() || split.test.empty()) {
        throw DataError("a fit run needs non-empty [train] and [test] sections");
    }
    const DvfsTable dvfs = load_dvfs(opts.dvfs_file);
    validate_points(table, dvfs);

    SearchConfig cfg;
    cfg.max_counters = fixed ? table.counter_names.size() : opts.max_counters;
    cfg.candidate_counters = table.counter_names;
    cfg.mode = fixed ? SearchMode::fixed
                     : (opts.mode == 2 ? SearchMode::exhaustive : SearchMode::bottom_up);
    cfg.criterion = SearchCriterion::avg_mape;

    const SearchResult result = search(table, split, dvfs, cfg);
    const FitReport test_report = evaluate(result.model, table, split.test);

    fs::create_directories(opts.out_dir);
    const fs::path out(opts.out_dir);
    save_pfm(result.model, out / "model.pfm");

    std::ostringstream log;
    log << "mode "
        << (cfg.mode == SearchMode::fixed
                ? "fixed"
                : cfg.mode == SearchMode::exhaustive ? "exhaustive" : "bottom_up")
        << '\n';
    log << "candidates " << cfg.candidate_counters.size() << ' '
        << join(cfg.candidate_counters) << '\n';
    for (const auto& w : result.warnings) log << "warning " << w << '\n';
    for (std::size_t i = 0; i < result.per_step_scores.size(); ++i) {
        log << "step " << (i + 1) << " add " << result.per_step_scores[i].counter
            << " criterion_pct " << full(result.per_step_scores[i].criterion_pct) << '\n';
    }
    log << "chosen " << result.chosen_counters.size() << ' ' << join(result.chosen_counters)
        << '\n';
    log << "final_criterion_pct " << full(result.final_criterion_pct) << '\n';
    log << "final_train_overall_pct " << full(result.final_report.overall_pct) << '\n';
    write_text(out / "search_log.txt", log.str());

    const std::vector<std::pair<std::string, FitReport>> reports{
        {"train", result.final_report}, {"test", test_report}};
    write_text(out / "errors_model.csv", error_table(reports).to_csv());

    std::vector<std::string> notes;
    notes.push_back("chosen counters: " + join(result.chosen_counters, ", "));
    for (const auto& w : result.warnings) notes.push_back("warning: " + w);
    write_text(out / "summary.txt", fit_summary(reports, notes));

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "chosen counters: " << join(result.chosen_counters, ", ") << '\n';
    std::cout << "train overall MAPE: " << human(result.final_report.overall_pct) << " %\n";
    std::cout << "test overall MAPE:  " << human(test_report.overall_pct) << " %\n";
    std::cout << "wrote " << (out / "model.pfm").string() << '\n';
}

// ----------------------------------------------------------------- unify --

struct UnifyOpts {
    std::string pfm_file;
    std::string dvfs_file;
    std::string sweep_file;
    std::string anchor = "mid";
    double t_ref_c = 23.0;
    double static_vexp = 2.0;
    std::string out_file;
};

void run_unify(const UnifyOpts& opts) {
    const PerFreqModel pf = load_pfm(opts.pfm_file);
    const DvfsTable dvfs = load_dvfs(opts.dvfs_file);
    const IdleSweep sweep = load_idle_sweep(opts.sweep_file);

    Anchor anchor = Anchor::UAM;
    if (opts.anchor == "low") anchor = Anchor::UAL;
    else if (opts.anchor == "mid") anchor = Anchor::UAM;
    else if (opts.anchor == "high") anchor = Anchor::UAH;
    else throw DataError("anchor must be low, mid or high");

    const UnifiedModel u =
        build_unified(pf, anchor, sweep, dvfs, opts.t_ref_c, opts.static_vexp);

    fs::path out = opts.out_file.empty()
                       ? fs::path(opts.pfm_file).replace_extension(".ufm")
                       : fs::path(opts.out_file);
    save_ufm(u, out);

    std::cout << "anchor " << to_string(u.anchor) << " at " << to_string(u.ref_point) << '\n';
    std::cout << "static power: " << human(u.static_w) << " W ("
              << (u.static_method == StaticMethod::zero_freq_intercept ? "zero-frequency intercept"
                                                                       : "dynamic subtraction")
              << ")\n";
    std::cout << "wrote " << out.string() << '\n';
}

// ---------------------------------------------------------------- thermal --

struct ThermalOpts {
    std::string ufm_file;
    std::vector<std::string> run_files;
    std::string out_file;
};

void run_thermal(const ThermalOpts& opts) {
    UnifiedModel u = load_ufm(opts.ufm_file);
    std::vector<ThermalRun> runs;
    runs.reserve(opts.run_files.size());
    for (const auto& f : opts.run_files) runs.push_back(load_thermal_run(f));

    const ThermalStaticModel tm = fit_thermal_static(runs);
    if (tm.voltage_v != u.ref_point.voltage_v) {
        throw DataError("thermal runs are at " + full(tm.voltage_v) +
                        " V but the model's reference point runs at " +
                        full(u.ref_point.voltage_v) + " V");
    }
    u.thermal = tm;

    const fs::path out = opts.out_file.empty() ? fs::path(opts.ufm_file)
                                               : fs::path(opts.out_file);
    save_ufm(u, out);

    std::cout << "static(T) = T * " << human(tm.slope_w_per_c) << " W/C + "
              << human(tm.intercept_w) << " W at " << human(tm.voltage_v) << " V, fitted over ["
              << human(tm.t_min_c) << ", " << human(tm.t_max_c) << "] C\n";
    std::cout << "wrote " << out.string() << '\n';
}

// ---------------------------------------------------------------- predict --

struct PredictOpts {
    std::string model_file;
    std::string measurements;
    std::string split_file;
    std::string subset = "";
    std::size_t power_column = kCanonicalPowerColumn;
    std::vector<std::size_t> counter_columns;
    std::string out_dir = ".";
    std::string tag;
};

void run_predict(const PredictOpts& opts) {
    const MeasurementTable table =
        load_table(opts.measurements, opts.power_column, opts.counter_columns);

    std::optional<std::set<std::string>> filter;
    std::string subset = opts.subset;
    if (!opts.split_file.empty()) {
        const BenchmarkSplit split = load_split(opts.split_file);
        if (subset.empty()) subset = "test";
        if (subset != "train" && subset != "test" && subset != "all") {
            throw DataError("subset must be train, test or all");
        }
        filter = subset_filter(split, subset);
    } else if (!subset.empty() && subset != "all") {
        throw DataError("--subset " + subset + " needs a split file (-b)");
    }

    const fs::path model_path(opts.model_file);
    const std::string ext = model_path.extension().string();
    const std::string tag = opts.tag.empty() ? model_path.stem().string() : opts.tag;

    MeasurementTable traced;
    traced.counter_names = table.counter_names;
    std::vector<double> predictions;
    std::vector<std::size_t> indices;
    FitReport report;
    std::vector<std::string> notes;

    if (ext == ".pfm") {
        const PerFreqModel m = load_pfm(model_path);
        std::size_t skipped = 0;
        for (std::size_t i = 0; i < table.samples.size(); ++i) {
            const Sample& s = table.samples[i];
            if (filter && !filter->count(s.benchmark)) continue;
            if (!m.entries.count(s.point)) {
                ++skipped; // exact point matching: unmodelled points are not traced
                continue;
            }
            traced.samples.push_back(s);
            predictions.push_back(predict_power(m, table.counter_names, s));
            indices.push_back(i);
        }
        report = evaluate(m, table, filter);
        if (skipped > 0) {
            notes.push_back("skipped " + std::to_string(skipped) +
                            " samples at points outside the model");
        }
    } else if (ext == ".ufm") {
        const UnifiedModel u = load_ufm(model_path);
        for (std::size_t i = 0; i < table.samples.size(); ++i) {
            const Sample& s = table.samples[i];
            if (filter && !filter->count(s.benchmark)) continue;
            traced.samples.push_back(s);
            predictions.push_back(u.thermal
                                      ? predict_unified_thermal(u, *u.thermal,
                                                                table.counter_names, s)
                                      : predict_unified(u, table.counter_names, s));
            indices.push_back(i);
        }
        report = evaluate_unified(u, table, filter);
        if (u.thermal) notes.push_back("temperature-aware prediction via the thermal block");
    } else {
        throw DataError("model file must end in .pfm or .ufm, got '" + opts.model_file + "'");
    }

    fs::create_directories(opts.out_dir);
    const fs::path out(opts.out_dir);
    write_text(out / ("trace_" + tag + ".csv"), trace(traced, predictions, indices).to_csv());
    const std::vector<std::pair<std::string, FitReport>> reports{{tag, report}};
    write_text(out / ("errors_" + tag + ".csv"), error_table(reports).to_csv());
    write_text(out / "summary.txt", fit_summary(reports, notes));

    std::cout << "overall MAPE: " << human(report.overall_pct) << " % over "
              << report.total_count << " samples\n";
    std::cout << "wrote " << (out / ("trace_" + tag + ".csv")).string() << '\n';
}

// ------------------------------------------------------------------ synth --

struct SynthOpts {
    std::string spec_file;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

void run_synth(const SynthOpts& opts) {
    SynthSpecFile spec =
        opts.spec_file.empty() ? default_spec_file() : load_spec(opts.spec_file);
    if (opts.seed) spec.gen.seed = *opts.seed;

    const SynthOutput data = generate(spec.gen);

    fs::create_directories(opts.out_dir);
    const fs::path out(opts.out_dir);
    save_measurements(data.table, out / "measurements.csv");
    save_dvfs(spec.gen.dvfs, out / "dvfs.csv");
    save_split(spec.split, out / "split.txt");
    save_idle_sweep(data.sweep, out / "idle_sweep.csv");
    for (std::size_t i = 0; i < data.runs.size(); ++i) {
        save_thermal_run(data.runs[i],
                         out / ("thermal_run_" + std::to_string(i + 1) + ".csv"));
    }

    std::cout << "generated " << data.table.samples.size() << " samples over "
              << spec.gen.dvfs.size() << " points and " << spec.gen.benchmarks.size()
              << " benchmarks (seed " << spec.gen.seed << ")\n";
    std::cout << "wrote measurements.csv, dvfs.csv, split.txt, idle_sweep.csv";
    if (!data.runs.empty()) std::cout << " and " << data.runs.size() << " thermal run files";
    std::cout << " in " << out.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"counter-based power modelling toolkit for DVFS-capable accelerators"};
    app.require_subcommand(1);

    SearchOpts search_opts;
    auto* cmd_search =
        app.add_subcommand("search", "select counters and fit per-frequency models");
    cmd_search->add_option("-r,--measurements", search_opts.measurements,
                           "measurement CSV")->required();
    cmd_search->add_option("-b,--split", search_opts.split_file,
                           "benchmark split file")->required();
    cmd_search->add_option("-f,--dvfs", search_opts.dvfs_file, "dvfs table CSV")->required();
    cmd_search->add_option("-p,--power-column", search_opts.power_column,
                           "1-based power column (default 5)");
    auto* opt_l = cmd_search->add_option("-l,--counter-columns", search_opts.counter_columns,
                                         "1-based candidate counter columns (default: 7..)")
                      ->delimiter(',');
    auto* opt_m = cmd_search->add_option("-m,--mode", search_opts.mode,
                                         "search mode: 1=bottom-up, 2=exhaustive")
                      ->check(CLI::IsMember({1, 2}));
    auto* opt_n = cmd_search->add_option("-n,--max-counters", search_opts.max_counters,
                                         "counter budget (default 4)");
    cmd_search->add_option("-c,--criterion", search_opts.criterion, "selection criterion id")
        ->check(CLI::Validator(
            [](std::string& s) {
                return s == "1" ? std::string()
                                : std::string("only criterion 1 (average MAPE across "
                                              "operating points) is implemented");
            },
            "CRITERION"));
    auto* opt_e = cmd_search->add_option("-e,--fixed-columns", search_opts.fixed_columns,
                                         "skip the search, fit these counter columns")
                      ->delimiter(',');
    opt_e->excludes(opt_l)->excludes(opt_m)->excludes(opt_n);
    cmd_search->add_option("--out-dir", search_opts.out_dir, "output directory (default .)");
    cmd_search->callback([&] { run_search(search_opts); });

    UnifyOpts unify_opts;
    auto* cmd_unify = app.add_subcommand("unify", "derive a unified model from a .pfm");
    cmd_unify->add_option("--pfm", unify_opts.pfm_file, "per-frequency model file")->required();
    cmd_unify->add_option("-f,--dvfs", unify_opts.dvfs_file, "dvfs table CSV")->required();
    cmd_unify->add_option("--idle-sweep", unify_opts.sweep_file, "idle sweep CSV")->required();
    cmd_unify->add_option("--anchor", unify_opts.anchor, "reference point: low, mid or high")
        ->check(CLI::IsMember({"low", "mid", "high"}));
    cmd_unify->add_option("--t-ref", unify_opts.t_ref_c,
                          "training temperature in C (default 23)");
    cmd_unify->add_option("--static-vexp", unify_opts.static_vexp,
                          "voltage exponent of the static term (default 2)");
    cmd_unify->add_option("-o,--out", unify_opts.out_file, "output .ufm (default: <pfm>.ufm)");
    cmd_unify->callback([&] { run_unify(unify_opts); });

    ThermalOpts thermal_opts;
    auto* cmd_thermal =
        app.add_subcommand("thermal", "fit a temperature law and attach it to a .ufm");
    cmd_thermal->add_option("--ufm", thermal_opts.ufm_file, "unified model file")->required();
    cmd_thermal->add_option("--runs", thermal_opts.run_files,
                            "thermal run CSVs (two or more)")->required()->expected(-2);
    cmd_thermal->add_option("-o,--out", thermal_opts.out_file,
                            "output .ufm (default: overwrite input)");
    cmd_thermal->callback([&] { run_thermal(thermal_opts); });

    PredictOpts predict_opts;
    auto* cmd_predict = app.add_subcommand("predict", "trace model predictions over a table");
    cmd_predict->add_option("--model", predict_opts.model_file, ".pfm or .ufm file")->required();
    cmd_predict->add_option("-r,--measurements", predict_opts.measurements,
                            "measurement CSV")->required();
    cmd_predict->add_option("-b,--split", predict_opts.split_file, "benchmark split file");
    cmd_predict->add_option("--subset", predict_opts.subset,
                            "train, test or all (default: test when -b is given)");
    cmd_predict->add_option("-p,--power-column", predict_opts.power_column,
                            "1-based power column (default 5)");
    cmd_predict->add_option("-l,--counter-columns", predict_opts.counter_columns,
                            "1-based counter columns (default: 7..)")
        ->delimiter(',');
    cmd_predict->add_option("--out-dir", predict_opts.out_dir, "output directory (default .)");
    cmd_predict->add_option("--tag", predict_opts.tag, "output tag (default: model stem)");
    cmd_predict->callback([&] { run_predict(predict_opts); });

    SynthOpts synth_opts;
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic fixture set");
    cmd_synth->add_option("--spec", synth_opts.spec_file,
                          "generator spec file (default: built-in demo generator)");
    cmd_synth->add_option("--seed", synth_opts.seed, "seed override");
    cmd_synth->add_option("--out-dir", synth_opts.out_dir, "output directory (default .)");
    cmd_synth->callback([&] { run_synth(synth_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
