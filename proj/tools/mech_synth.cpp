// mech-synth: four-bar path synthesis by differential evolution with
// selectable constraint-handling strategies.

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mechsynth/harness.hpp"
#include "mechsynth/io.hpp"

namespace fs = std::filesystem;
using namespace mechsynth;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitUnassemblable = 2;

struct SearchFlags {
    std::string case_id;
    std::string strategy = "nsi";
    std::uint64_t seed = 0;
    std::optional<int> np;
    std::optional<int> itermax;
    std::optional<double> f;
    std::optional<double> cr;
    std::optional<double> mp;
    std::optional<double> stop_error;
    std::optional<std::string> mutation;
    int max_retries = 6;
    bool ssi_literal_s = false;
    std::string out;
};

void add_search_flags(CLI::App& cmd, SearchFlags& flags)
{
    cmd.add_option("--case", flags.case_id, "Built-in case (1, 2, 2r, 3) or a case JSON file")->required();
    cmd.add_option("--strategy", flags.strategy, "nsi | asi-ig | asi-ag | lsi | ssi")->required();
    cmd.add_option("--np", flags.np, "Population size");
    cmd.add_option("--itermax", flags.itermax, "Maximum generations");
    cmd.add_option("--f", flags.f, "Differential weight");
    cmd.add_option("--cr", flags.cr, "Crossover rate");
    cmd.add_option("--mp", flags.mp, "Per-gene extra mutation probability");
    cmd.add_option("--mutation", flags.mutation, "either-or (default) | best1bin");
    cmd.add_option("--stop-error", flags.stop_error, "Stop once the best objective is at or below this value");
    cmd.add_option("--max-retries", flags.max_retries, "ASI-AG resamples per trial")->capture_default_str();
    cmd.add_flag("--ssi-literal-s", flags.ssi_literal_s, "SSI: use S = r1 - r4 - r2 + r3 as printed");
    cmd.add_option("--out", flags.out, "Output directory")->required();
}

struct Setup {
    CaseSpec spec;
    StrategySpec strategy;
    DEConfig cfg;
};

Setup resolve(const SearchFlags& flags, std::uint64_t seed)
{
    Setup s;
    s.spec = io::load_case(flags.case_id);
    s.strategy.kind = parse_strategy(flags.strategy);
    s.strategy.max_retries = flags.max_retries;
    s.strategy.ssi_literal_s = flags.ssi_literal_s;
    s.strategy.validate();

    s.cfg = s.spec.default_de;
    s.cfg.seed = seed;
    if (flags.np) s.cfg.np = *flags.np;
    if (flags.itermax) s.cfg.itermax = *flags.itermax;
    if (flags.f) s.cfg.f = *flags.f;
    if (flags.cr) s.cfg.cr = *flags.cr;
    if (flags.mp) s.cfg.mp = *flags.mp;
    if (flags.stop_error) s.cfg.stop_error = *flags.stop_error;
    if (flags.mutation) s.cfg.mutation = parse_mutation(*flags.mutation);
    s.cfg.validate();
    return s;
}

std::vector<double> sweep(int samples)
{
    std::vector<double> angles(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        angles[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / samples;
    return angles;
}

void write_run_outputs(const fs::path& dir, const RunRecord& record, const CaseSpec& spec, const std::string& stem)
{
    io::write_json(dir / (stem + ".json"), io::record_to_json(record));
    {
        auto out = io::open_output(dir / (stem + "_history.csv"));
        io::write_history_csv(out, record);
    }
    const Decoded d = decode(record.best_vector, spec);
    const Branch branch = branch_errors(d, spec).best_branch();
    {
        auto out = io::open_output(dir / (stem + "_path.csv"));
        const auto angles = sweep(360);
        io::write_trace_csv(out, d.params, angles, branch);
    }
    {
        auto out = io::open_output(dir / (stem + "_mechanism.csv"));
        io::write_mechanism_csv(out, d.params, d.theta1, branch);
    }
}

int cmd_run(const SearchFlags& flags)
{
    const Setup s = resolve(flags, flags.seed);
    const RunRecord record = run(s.spec, s.strategy, s.cfg);
    write_run_outputs(flags.out, record, s.spec, "run");

    std::cout << std::setprecision(6) << "case " << record.case_name << ", strategy " << record.strategy << ", seed "
              << record.seed << "\n"
              << "best error      " << record.best_error << "\n"
              << "best penalized  " << record.best_penalized << "\n"
              << "generations     " << record.stop_generation << "\n"
              << "wall time (s)   " << record.wall_time << "\n";
    if (const auto c = convergence_percent(record.history, std::min(100, record.stop_generation)))
        std::cout << "convergence@" << std::min(100, record.stop_generation) << " " << *c << " %\n";
    return 0;
}

int cmd_batch(const SearchFlags& flags, int runs, std::uint64_t seed_base, unsigned jobs)
{
    const Setup s = resolve(flags, seed_base);
    const BatchStats stats = batch_run(s.spec, s.strategy, s.cfg, runs, seed_base, jobs);
    const fs::path dir = flags.out;
    io::write_json(dir / "batch.json", io::stats_to_json(stats));
    {
        auto out = io::open_output(dir / "errors.csv");
        io::write_errors_csv(out, stats);
    }
    write_run_outputs(dir, stats.records[stats.best_run], s.spec, "best_run");

    std::cout << "case " << s.spec.name << ", strategy " << to_string(s.strategy.kind) << ", " << stats.runs
              << " runs\n";
    for (std::size_t i = 0; i < stats.thresholds.values.size(); ++i)
        std::cout << "  < " << std::setw(8) << stats.thresholds.values[i] << "  " << stats.buckets.cumulative[i] << "\n";
    std::cout << "  = " << std::setw(8) << kErrorCap << "  " << stats.buckets.capped << "\n"
              << "best error " << stats.records[stats.best_run].best_error << " (seed "
              << stats.records[stats.best_run].seed << "), mean wall time " << stats.mean_wall_time << " s\n";
    return 0;
}

int cmd_eval(const std::string& case_id, const std::string& vector_path)
{
    const CaseSpec spec = io::load_case(case_id);
    const DesignVector v = io::load_vector(vector_path);
    const Decoded d = decode(v, spec);
    const BranchErrors be = branch_errors(d, spec);
    const ConstraintReport report = constraint_report(d, spec);
    const Evaluation e = evaluate(v, spec);

    std::cout << std::setprecision(10) << "raw error        " << e.raw << "\n"
              << "penalized error  " << e.penalized << "\n"
              << "open branch      " << be.open << "\n"
              << "crossed branch   " << be.crossed << "\n"
              << "best branch      " << to_string(be.best_branch()) << "\n"
              << "grashof          " << (report.grashof_ok ? "ok" : "violated") << " (violation "
              << report.grashof_violation << ")\n"
              << "sequence         " << (report.sequence_ok ? "ok" : "violated") << "\n";
    if (be.open >= kAssemblyFailure && be.crossed >= kAssemblyFailure) {
        std::cerr << "mech-synth: the linkage cannot be assembled at the target angles on either branch\n";
        return kExitUnassemblable;
    }
    return 0;
}

int cmd_trace(const std::string& case_id, const std::string& vector_path, int samples, const std::string& out_path)
{
    if (samples < 1) throw std::invalid_argument("--samples must be positive");
    const CaseSpec spec = io::load_case(case_id);
    const Decoded d = decode(io::load_vector(vector_path), spec);
    const Branch branch = branch_errors(d, spec).best_branch();
    auto out = io::open_output(out_path);
    const auto angles = sweep(samples);
    const std::size_t assembled = io::write_trace_csv(out, d.params, angles, branch);
    std::cout << assembled << " of " << samples << " samples assembled on the " << to_string(branch) << " branch\n";
    return assembled == 0 ? kExitUnassemblable : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Four-bar linkage path synthesis with differential evolution"};
    app.require_subcommand(1);

    SearchFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run one optimization");
    add_search_flags(*run_cmd, run_flags);
    run_cmd->add_option("--seed", run_flags.seed, "Random seed")->required();

    SearchFlags batch_flags;
    int runs = 100;
    std::uint64_t seed_base = 0;
    unsigned jobs = 0;
    auto* batch_cmd = app.add_subcommand("batch", "Run seeds seed-base .. seed-base+runs-1 and tabulate");
    add_search_flags(*batch_cmd, batch_flags);
    batch_cmd->add_option("--runs", runs, "Number of runs")->required();
    batch_cmd->add_option("--seed-base", seed_base, "First seed")->required();
    batch_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    std::string eval_case, eval_vector;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a design vector");
    eval_cmd->add_option("--case", eval_case, "Case id or file")->required();
    eval_cmd->add_option("--vector", eval_vector, "Vector file")->required();

    std::string trace_case, trace_vector, trace_out;
    int samples = 360;
    auto* trace_cmd = app.add_subcommand("trace", "Sample the coupler curve of a design vector");
    trace_cmd->add_option("--case", trace_case, "Case id or file")->required();
    trace_cmd->add_option("--vector", trace_vector, "Vector file")->required();
    trace_cmd->add_option("--samples", samples, "Crank angles over one revolution")->capture_default_str();
    trace_cmd->add_option("--out", trace_out, "Output CSV")->required();

    std::string export_case, export_out;
    auto* case_cmd = app.add_subcommand("case", "Case documents");
    case_cmd->require_subcommand(1);
    auto* export_cmd = case_cmd->add_subcommand("export", "Write a case as JSON");
    export_cmd->add_option("--case", export_case, "Case id or file")->required();
    export_cmd->add_option("--out", export_out, "Output JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*run_cmd) return cmd_run(run_flags);
        if (*batch_cmd) return cmd_batch(batch_flags, runs, seed_base, jobs);
        if (*eval_cmd) return cmd_eval(eval_case, eval_vector);
        if (*trace_cmd) return cmd_trace(trace_case, trace_vector, samples, trace_out);
        if (*export_cmd) {
            io::write_json(export_out, io::case_to_json(io::load_case(export_case)));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "mech-synth: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
