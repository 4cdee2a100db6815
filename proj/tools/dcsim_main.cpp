// dcsim: run, sweep, gen and analyze from a config file plus flags.
//
// Exit codes: 0 success, 1 trace or runtime error, 2 usage/config error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dcsim/config.h"
#include "dcsim/generators.h"
#include "dcsim/report.h"
#include "dcsim/simulation.h"
#include "dcsim/sweep.h"
#include "dcsim/trace_io.h"

using namespace dcsim;

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

// Flags shared by run and sweep. Each one that is given overrides the
// matching config key.
struct common_flags {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::string> policy, trace, gen, analyzers, label, capacity, ways, region, line, dwp_bits;
    std::optional<uint64_t> seed;
    bool dwp = false;
    std::string out;
    std::string emit = "jsonl";
    std::string baseline;
    bool dump_config = false;

    void add_to(CLI::App& app)
    {
        app.add_option("--config", config_path, "INI config file (flags override it)");
        app.add_option("--set", sets, "Override any key: section.key=value (repeatable)");
        app.add_option("--policy", policy, "Policy name");
        app.add_option("--trace", trace, "Trace file (plain or gzip)");
        app.add_option("--gen", gen, "Generator spec instead of a trace file, e.g. region_stream:passes=4");
        app.add_option("--seed", seed, "Run seed");
        app.add_option("--analyzers", analyzers, "Comma list of coresidency,evloc");
        app.add_option("--label", label, "Report label");
        app.add_option("--capacity", capacity, "Cache capacity, e.g. 2GB");
        app.add_option("--ways", ways, "1 or 2");
        app.add_option("--region", region, "Region size, e.g. 4KB");
        app.add_option("--line", line, "Line size in bytes");
        app.add_flag("--dwp", dwp, "Wrap the policy in the dynamic write-allocate predictor");
        app.add_option("--dwp-bits", dwp_bits, "DWP counter width");
        app.add_option("--baseline", baseline, "Also run this policy and add normalized ratios");
        app.add_option("--out", out, "Output file (default stdout)");
        app.add_option("--emit", emit, "jsonl, csv or table")->check(CLI::IsMember({"jsonl", "csv", "table"}));
        app.add_flag("--dump-config", dump_config, "Print the effective config and exit");
    }

    run_config resolve() const
    {
        run_config c;
        if (!config_path.empty())
            c.load_file(config_path);
        for (const auto& s : sets)
            c.set_assignment(s);
        auto apply = [&](const char* key, const std::optional<std::string>& v) {
            if (v)
                c.set(key, *v);
        };
        apply("policy.name", policy);
        apply("cache.capacity", capacity);
        apply("cache.ways", ways);
        apply("cache.region", region);
        apply("cache.line", line);
        apply("dwp.bits", dwp_bits);
        apply("run.analyzers", analyzers);
        apply("run.label", label);
        if (trace) {
            c.set("run.trace", *trace);
            c.set("run.gen", "");
        }
        if (gen) {
            c.set("run.gen", *gen);
            c.set("run.trace", "");
        }
        if (seed)
            c.set("run.seed", std::to_string(*seed));
        if (dwp)
            c.set("policy.dwp", "true");
        return c;
    }
};

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

int cmd_run(const common_flags& f)
{
    const run_config config = f.resolve();
    if (f.dump_config) {
        write_output(f.out, config.dump());
        return 0;
    }
    make_policy(config); // report config problems before reading the trace
    const trace_input trace = load_trace(config, warn);
    const std::string label = config.get("run.label");
    auto report = run_records(config, trace.records, label, trace.name);
    if (!f.baseline.empty()) {
        run_config b = config;
        b.set("policy.name", f.baseline);
        b.set("policy.dwp", "false");
        b.set("run.analyzers", "");
        add_normalized(report, run_records(b, trace.records, f.baseline, trace.name));
    }
    const std::vector<nlohmann::ordered_json> reports{report};
    write_output(f.out, emit(parse_report_format(f.emit), reports));
    return 0;
}

int cmd_sweep(const common_flags& f, const std::string& policies, const std::vector<std::string>& grid,
              unsigned jobs)
{
    const run_config config = f.resolve();
    std::vector<grid_axis> axes;
    if (!policies.empty())
        axes.push_back(parse_grid_axis("policy.name=" + policies));
    for (const auto& g : grid)
        axes.push_back(parse_grid_axis(g));
    if (f.dump_config) {
        write_output(f.out, config.dump());
        return 0;
    }
    const trace_input trace = load_trace(config, warn);
    sweep_options opts;
    opts.jobs = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
    opts.baseline_policy = f.baseline;
    opts.label_prefix = config.get("run.label");
    const auto reports = run_sweep(config, axes, trace.records, trace.name, opts);
    write_output(f.out, emit(parse_report_format(f.emit), reports));
    return 0;
}

int cmd_gen(const std::string& spec_text, const std::string& out)
{
    const trace_spec spec = parse_trace_spec(spec_text);
    const auto records = generate(spec);
    if (out.empty() || out == "-") {
        write_trace(std::cout, records, "gen " + spec.str());
        return 0;
    }
    write_trace_file(out, records, "gen " + spec.str());
    return 0;
}

int cmd_analyze(const std::vector<std::string>& files, const std::string& baseline, const std::string& format,
                const std::string& out)
{
    std::vector<nlohmann::ordered_json> reports;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open report file " + path);
        std::ostringstream text;
        text << in.rdbuf();
        for (auto& r : parse_jsonl(text.str(), path))
            reports.push_back(std::move(r));
    }
    if (reports.empty())
        throw std::runtime_error("no reports in input");
    if (!baseline.empty()) {
        const nlohmann::ordered_json base = reports[find_baseline(reports, baseline)];
        for (auto& r : reports)
            add_normalized(r, base);
    }
    write_output(out, emit(parse_report_format(format), reports));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Trace-driven DRAM cache replacement and bypass simulator"};
    app.require_subcommand(1);

    common_flags run_flags;
    auto* run = app.add_subcommand("run", "Simulate one configuration");
    run_flags.add_to(*run);

    common_flags sweep_flags;
    std::string policies;
    std::vector<std::string> grid;
    unsigned jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "Simulate every point of a parameter grid");
    sweep_flags.add_to(*sweep);
    sweep->add_option("--policies", policies, "Comma list of policies (first grid axis)");
    sweep->add_option("--grid", grid, "Axis section.key=v1,v2,... (repeatable)");
    sweep->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");

    std::string spec, gen_out;
    auto* gen = app.add_subcommand("gen", "Write a synthetic trace");
    gen->add_option("--spec", spec, "pattern[:key=value,...]")->required();
    gen->add_option("--out", gen_out, "Output file; .gz compresses (default stdout)");

    std::vector<std::string> files;
    std::string analyze_baseline, analyze_emit = "table", analyze_out;
    auto* analyze = app.add_subcommand("analyze", "Join JSON-lines reports and normalize against a baseline");
    analyze->add_option("reports", files, "Report files (JSON lines)")->required();
    analyze->add_option("--baseline", analyze_baseline, "Label or policy of the baseline report");
    analyze->add_option("--emit", analyze_emit, "jsonl, csv or table")->check(CLI::IsMember({"jsonl", "csv", "table"}));
    analyze->add_option("--out", analyze_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*run)
            return cmd_run(run_flags);
        if (*sweep)
            return cmd_sweep(sweep_flags, policies, grid, jobs);
        if (*gen)
            return cmd_gen(spec, gen_out);
        if (*analyze)
            return cmd_analyze(files, analyze_baseline, analyze_emit, analyze_out);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const trace_error& e) {
        std::cerr << "trace error: " << e.what() << '\n';
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}
