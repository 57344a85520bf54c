#include "cpnconf/diagnostics.hpp"
#include "cpnconf/errors.hpp"
#include "cpnconf/event_log.hpp"
#include "cpnconf/model_io.hpp"
#include "cpnconf/replay.hpp"
#include "cpnconf/report.hpp"
#include "cpnconf/trading.hpp"
#include "cpnconf/util.hpp"
#include "cpnconf/validation.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

namespace {

using namespace cpnconf;

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitInputError = 2;

class Stopwatch {
public:
    std::int64_t elapsed_ms() const {
        auto now = std::chrono::steady_clock::now();
        return std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_violations(const ValidationReport& report) {
    for (const Violation& v : report.violations) {
        std::string clause;
        if (v.code.size() >= 3 && v.code.compare(0, 2, "cw") == 0 &&
            std::isdigit(static_cast<unsigned char>(v.code[2]))) {
            clause = std::string("condition ") + v.code[2] + " violated, ";
        }
        std::cout << clause << v.code << " [" << v.context << "]: " << v.message << "\n";
    }
}

int cmd_validate_model(const std::string& model_path) {
    CPN cpn = load_model(model_path);
    ValidationReport syntax = validate_syntax(cpn);
    if (!syntax.ok()) {
        print_violations(syntax);
        std::cout << syntax.violations.size() << " structural violation(s)\n";
        return kExitFindings;
    }
    ValidationReport conservative = validate_conservative_workflow(cpn);
    if (!conservative.ok()) {
        print_violations(conservative);
        std::cout << conservative.violations.size() << " conservative-workflow violation(s)\n";
        return kExitFindings;
    }
    std::cout << "model ok: " << cpn.places.size() << " places, " << cpn.transitions.size()
              << " transitions, " << cpn.arcs.size() << " arcs\n";
    return kExitOk;
}

unsigned resolve_jobs(unsigned jobs) {
    if (jobs != 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

int cmd_check(const std::string& model_path, const std::string& log_path,
              const std::string& out_dir, unsigned jobs, bool fail_on_deviation) {
    Stopwatch watch;
    CPN cpn = load_model(model_path);
    {
        ValidationReport syntax = validate_syntax(cpn);
        if (syntax.ok()) {
            ValidationReport conservative = validate_conservative_workflow(cpn);
            syntax.violations.insert(syntax.violations.end(), conservative.violations.begin(),
                                     conservative.violations.end());
        }
        if (!syntax.ok()) {
            print_violations(syntax);
            throw ConfigError("model " + model_path + " is not a valid conservative-workflow net");
        }
    }

    EventLog log = read_log(log_path);

    // Traces that do not map onto the net are skipped, not fatal.
    EventLog usable;
    std::size_t skipped = 0;
    for (Trace& trace : log.traces) {
        ValidationReport report = check_syntactic_correctness(trace, cpn);
        if (report.ok()) {
            usable.traces.push_back(std::move(trace));
        } else {
            ++skipped;
            log_warn("skipping trace " + trace.trace_id + ": " +
                     report.violations.front().message + " (" +
                     std::to_string(report.violations.size()) + " violation(s))");
        }
    }

    LogReplay replay = replay_log(cpn, usable, resolve_jobs(jobs));
    DiagnosticsSummary summary = aggregate(replay.per_trace, cpn);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto out_path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

    write_text_file(out_path("deviations.tsv"), deviations_tsv(replay));
    write_text_file(out_path("fitness.csv"), fitness_csv(replay));
    write_text_file(out_path("diagnostics.json"), summary_to_json(summary).dump(2) + "\n");
    export_enhanced_model(cpn, summary, out_path("enhanced_model.dot"));

    RunManifest manifest;
    manifest.command = "check";
    manifest.inputs = {model_path, log_path};
    manifest.model_hash = fnv1a64_hex(read_text_file(model_path));
    manifest.trace_count = usable.traces.size();
    manifest.event_count = usable.event_count();
    manifest.outputs = {out_path("deviations.tsv"), out_path("fitness.csv"),
                        out_path("diagnostics.json"), out_path("enhanced_model.dot")};
    manifest.wall_ms = watch.elapsed_ms();
    write_manifest(manifest, out_path("manifest.json"));

    std::size_t total_deviations = 0;
    std::cout << "traces checked: " << usable.traces.size() << " (skipped " << skipped << ")\n";
    std::cout << "events replayed: " << usable.event_count() << "\n";
    for (const auto& [kind, count] : summary.deviation_totals) {
        std::cout << deviation_name(kind) << ": " << count << "\n";
        total_deviations += count;
    }
    char fitness_buf[32];
    std::snprintf(fitness_buf, sizeof fitness_buf, "%.4f", replay.aggregate_fitness);
    std::cout << "jumps: " << replay.totals.jumps << ", consumed: " << replay.totals.consumed
              << ", aggregate fitness: " << fitness_buf << "\n";
    std::cout << "outputs in " << out_dir << "\n";

    if (fail_on_deviation && total_deviations > 0) return kExitFindings;
    return kExitOk;
}

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::size_t> traces_override,
                 std::optional<std::uint64_t> seed_override) {
    Stopwatch watch;
    SimConfig config = SimConfig::experiment_defaults();
    if (!config_path.empty()) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_text_file(config_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(e.what(), config_path);
        }
        config = SimConfig::from_json(doc);
    }
    if (traces_override) config.traces = *traces_override;
    if (seed_override) config.rng_seed = *seed_override;
    config.validate();

    GeneratedLog generated = generate_log(config);
    write_log(generated.log, out_path,
              {"seed=" + std::to_string(config.rng_seed), "config=" + config.to_json().dump()});

    RunManifest manifest;
    manifest.command = "generate";
    if (!config_path.empty()) manifest.inputs.push_back(config_path);
    manifest.seed = config.rng_seed;
    manifest.trace_count = generated.log.traces.size();
    manifest.event_count = generated.log.event_count();
    manifest.outputs = {out_path};
    manifest.wall_ms = watch.elapsed_ms();
    write_manifest(manifest, out_path + ".manifest.json");

    std::cout << "wrote " << generated.log.traces.size() << " traces, "
              << generated.log.event_count() << " events to " << out_path << "\n";
    std::cout << "injected: skipped submissions " << generated.stats.skipped_submissions()
              << " (buy " << generated.stats.skipped_buy << ", sell " << generated.stats.skipped_sell
              << "), deadlocks " << generated.stats.deadlocked_sells << ", corrupted events "
              << generated.stats.corrupted_events << ", forced mismatches "
              << generated.stats.forced_mismatches << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformance checking of trading-system event logs on colored Petri nets"};
    app.require_subcommand(1);

    std::string model_path, log_path, config_path;
    std::string out_dir = "cpnconf-out";
    std::string out_log = "generated_log.jsonl";
    unsigned jobs = 1;
    bool fail_on_deviation = false;
    std::optional<std::size_t> traces_override;
    std::optional<std::uint64_t> seed_override;

    CLI::App* validate = app.add_subcommand("validate-model", "Check a model definition");
    validate->add_option("--model", model_path, "model JSON file")->required();

    CLI::App* check = app.add_subcommand("check", "Replay a log against a model");
    check->add_option("--model", model_path, "model JSON file")->required();
    check->add_option("--log", log_path, "event log (JSONL)")->required();
    check->add_option("--out", out_dir, "output directory")->capture_default_str();
    check->add_option("--jobs", jobs, "replay threads, 0 = auto")->capture_default_str();
    check->add_flag("--fail-on-deviation", fail_on_deviation,
                    "exit 1 when any deviation is found");

    CLI::App* generate = app.add_subcommand("generate", "Simulate an order-book event log");
    generate->add_option("--config", config_path, "simulation config JSON");
    generate->add_option("--out", out_log, "output log path")->capture_default_str();
    generate->add_option("--traces", traces_override, "override trace count");
    generate->add_option("--seed", seed_override, "override RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (validate->parsed()) return cmd_validate_model(model_path);
        if (check->parsed()) {
            return cmd_check(model_path, log_path, out_dir, jobs, fail_on_deviation);
        }
        return cmd_generate(config_path, out_log, traces_override, seed_override);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
