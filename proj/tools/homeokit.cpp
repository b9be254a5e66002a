// homeokit command-line driver: train, run, replicate, compare, poc.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "homeokit/errors.hpp"
#include "homeokit/harness.hpp"
#include "homeokit/stats.hpp"

namespace fs = std::filesystem;
using namespace homeokit;

namespace {

struct Common {
    std::string config_path;
    std::string preset;
    std::optional<std::string> controller;
    std::optional<std::uint64_t> seed;
    std::optional<double> minutes;
    std::optional<std::string> cmm_path;
};

void add_common(CLI::App* cmd, Common& c) {
    auto* cfg = cmd->add_option("-c,--config", c.config_path, "Experiment config JSON");
    cmd->add_option("--preset", c.preset, "Built-in experiment instead of a config file")
        ->check(CLI::IsMember({"experiment1", "experiment2"}))
        ->excludes(cfg);
    cmd->add_option("--controller", c.controller, "Decision component")->check(CLI::IsMember({"cdm", "threshold"}));
    cmd->add_option("-s,--seed", c.seed, "RNG seed (base seed for replicates)");
    cmd->add_option("--minutes", c.minutes, "Override the maximum run length");
    cmd->add_option("--cmm", c.cmm_path, "Trained correlation matrix JSON");
}

ExperimentConfig build_config(const Common& c) {
    ExperimentConfig cfg;
    if (!c.config_path.empty()) cfg = load_config(c.config_path);
    else if (c.preset == "experiment2") cfg = experiment2_config();
    else cfg = experiment1_config();
    if (c.controller) cfg.controller = controller_kind_from_string(*c.controller);
    if (c.seed) cfg.seed = *c.seed;
    if (c.minutes) cfg.max_minutes = *c.minutes;
    if (c.cmm_path) {
        cfg.cmm.reset();
        cfg.cmm_path = *c.cmm_path;
    }
    cfg.validate();
    return cfg;
}

void print_matrix(const CorrelationMatrix& m) {
    for (const auto& row : m.to_rows()) {
        std::string line;
        for (auto v : row) line += v ? '1' : '0';
        fmt::print("  {}\n", line);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homeostatic robot controller simulations"};
    app.require_subcommand(1);

    Common train_opts;
    std::string train_out;
    std::optional<double> train_duration;
    std::optional<std::string> train_trace;
    auto* train = app.add_subcommand("train", "Train the colour/need memory");
    add_common(train, train_opts);
    train->add_option("-o,--out", train_out, "Output CMM JSON")->required();
    train->add_option("--duration", train_duration, "Training duration in seconds");
    train->add_option("--trace", train_trace, "Training trace CSV");

    Common run_opts;
    std::optional<std::string> run_trace, run_summary;
    auto* run = app.add_subcommand("run", "Single survival run");
    add_common(run, run_opts);
    run->add_option("--trace", run_trace, "Directory for the trace and summary CSVs");
    run->add_option("--summary", run_summary, "Summary CSV (default <trace dir>/summary.csv)");

    Common rep_opts;
    std::size_t rep_n = 20;
    std::string rep_summary;
    std::optional<std::string> rep_trace_dir;
    bool rep_serial = false;
    auto* rep = app.add_subcommand("replicate", "Independent replicates over consecutive seeds");
    add_common(rep, rep_opts);
    rep->add_option("-n,--n", rep_n, "Number of replicates")->check(CLI::PositiveNumber);
    rep->add_option("--summary", rep_summary, "Summary CSV")->required();
    rep->add_option("--trace-dir", rep_trace_dir, "Directory for per-replicate traces");
    rep->add_flag("--serial", rep_serial, "Run replicates on one thread");

    std::string cmp_test, cmp_control;
    auto* cmp = app.add_subcommand("compare", "Mann-Whitney-Wilcoxon and Vargha-Delaney A on two summaries");
    cmp->add_option("--test", cmp_test, "Summary CSV of the test group")->required();
    cmp->add_option("--control", cmp_control, "Summary CSV of the control group")->required();

    Common poc_opts;
    std::string poc_schedule, poc_trace;
    std::optional<double> poc_duration;
    auto* poc = app.add_subcommand("poc", "Scripted motive schedule through a trained memory");
    add_common(poc, poc_opts);
    poc->add_option("--schedule", poc_schedule, "Motive schedule JSON")->required();
    poc->add_option("--trace", poc_trace, "Trace CSV")->required();
    poc->add_option("--duration", poc_duration, "Run length in seconds");

    Common dump_opts;
    auto* dump = app.add_subcommand("config", "Print the effective experiment config");
    add_common(dump, dump_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            const auto cfg = build_config(train_opts);
            const auto result = run_training(cfg, train_duration.value_or(cfg.training_duration_s), cfg.seed);
            save_cmm(result.cmm, train_out);
            if (train_trace) write_trace_csv(result.trace, *train_trace);
            fmt::print("trained {} pair(s) -> {}\n", result.cmm.trained_pairs(), train_out);
            print_matrix(result.cmm);
        } else if (*run) {
            const auto cfg = build_config(run_opts);
            const auto record = run_experiment(cfg, run_trace.has_value());
            if (run_trace) {
                const fs::path dir = *run_trace;
                export_csv({record}, run_summary ? fs::path(*run_summary) : dir / "summary.csv", dir);
            } else if (run_summary) {
                write_summary_csv({record}, *run_summary);
            }
            fmt::print("{} seed {}: survived {:.2f} s ({:.2f} min), {}\n", to_string(record.controller), record.seed,
                       record.survival_s, record.survival_min(), to_string(record.fail_cause));
        } else if (*rep) {
            const auto cfg = build_config(rep_opts);
            const bool traces = rep_trace_dir.has_value();
            const auto records = rep_serial ? run_replicates_serial(cfg, rep_n, cfg.seed, traces)
                                            : run_replicates(cfg, rep_n, cfg.seed, traces);
            std::optional<fs::path> dir;
            if (rep_trace_dir) dir = *rep_trace_dir;
            export_csv(records, rep_summary, dir);
            double total = 0.0;
            for (const auto& r : records) total += r.survival_min();
            fmt::print("{} replicates of {} ({}): mean survival {:.2f} min -> {}\n", records.size(), cfg.name,
                       to_string(cfg.controller), total / static_cast<double>(records.size()), rep_summary);
        } else if (*cmp) {
            const auto test = read_summary_survival(cmp_test);
            const auto control = read_summary_survival(cmp_control);
            const auto r = mann_whitney(test, control);
            fmt::print("n_test={} n_control={} U={:.1f} p={:.4g} ({}) A={:.4f}\n", test.size(), control.size(),
                       r.u_statistic, r.p_value, r.exact ? "exact" : "normal", r.a_measure);
        } else if (*poc) {
            const auto cfg = build_config(poc_opts);
            const auto cmm = resolve_cmm(cfg);
            const auto trace = run_poc(cfg, cmm, load_schedule(poc_schedule), cfg.seed, poc_duration);
            write_trace_csv(trace, poc_trace);
            fmt::print("{} ticks -> {}\n", trace.size(), poc_trace);
        } else if (*dump) {
            std::cout << config_to_json(build_config(dump_opts)).dump(2) << '\n';
        }
    } catch (const IoError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
