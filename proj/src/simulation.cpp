#include "dcsim/simulation.h"

#include <stdexcept>

#include "dcsim/generators.h"
#include "dcsim/report.h"
#include "dcsim/storage_audit.h"

namespace dcsim {

analyzer_selection analyzer_selection::parse(std::string_view list)
{
    analyzer_selection s;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const std::string_view item = list.substr(0, comma);
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        if (item == "coresidency")
            s.coresidency = true;
        else if (item == "evloc" || item == "eviction_locality")
            s.eviction_locality = true;
        else if (!item.empty())
            throw config_error("unknown analyzer '" + std::string(item) + "' (known: coresidency, evloc)");
    }
    return s;
}

simulation::simulation(const run_config& config) : config_(config), cache_(make_cache(config))
{
    const auto selected = analyzer_selection::parse(config.get("run.analyzers"));
    if (selected.coresidency) {
        coresidency_ = std::make_unique<coresidency_analyzer>(cache_->geometry());
        cache_->attach(*coresidency_);
    }
    if (selected.eviction_locality) {
        evloc_ = std::make_unique<eviction_locality_analyzer>();
        cache_->attach(*evloc_);
    }
}

void simulation::run(trace_source& trace)
{
    access_record r;
    uint64_t n = 0;
    while (trace.next(r)) {
        cache_->access(r);
        ++n;
    }
    if (n == 0)
        throw std::runtime_error("trace is empty");
}

namespace {

double ratio(uint64_t num, uint64_t den)
{
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

} // namespace

nlohmann::ordered_json simulation::report(const std::string& label, const std::string& trace_name) const
{
    using nlohmann::ordered_json;
    const run_counters& c = cache_->counters();
    const bandwidth_ledger& l = cache_->ledger();

    ordered_json j;
    j["schema"] = report_schema;
    j["label"] = label;
    j["policy"] = std::string(cache_->policy().name());
    j["trace"] = trace_name;
    j["seed"] = config_.seed();
    j["config"] = config_.to_json();
    j["accesses"] = c.accesses;
    j["reads"] = c.reads;
    j["writes"] = c.writes;
    j["hits"] = c.hits;
    j["misses"] = c.misses;
    j["hit_rate"] = ratio(c.hits, c.accesses);
    j["installs"] = c.installs;
    j["bypasses"] = c.bypasses;
    j["invalid_fills"] = c.invalid_fills;
    j["evictions"] = c.evictions;
    j["dirty_evictions"] = c.dirty_evictions;

    ordered_json threads = ordered_json::array();
    for (const auto& [id, t] : c.threads) {
        ordered_json tj;
        tj["thread"] = id;
        tj["accesses"] = t.accesses;
        tj["misses"] = t.misses;
        tj["instructions"] = t.instructions();
        tj["mpki"] = t.instructions() ? static_cast<double>(t.misses) * 1000.0 / static_cast<double>(t.instructions())
                                      : 0.0;
        threads.push_back(std::move(tj));
    }
    j["threads"] = std::move(threads);

    ordered_json lj;
    for (std::size_t i = 0; i < ledger_event_count; ++i) {
        const auto e = static_cast<ledger_event>(i);
        lj[std::string(to_string(e))] = l.count(e);
    }
    lj["cache_transactions"] = l.cache_transactions();
    j["ledger"] = std::move(lj);

    ordered_json wp;
    wp["predicted_hits"] = c.predicted_hits;
    wp["correct"] = c.correctly_predicted;
    wp["accuracy"] = ratio(c.correctly_predicted, c.predicted_hits);
    j["way_prediction"] = std::move(wp);

    ordered_json ps = ordered_json::object();
    cache_->policy().describe(ps);
    j["policy_state"] = std::move(ps);

    ordered_json storage;
    describe_storage(cache_->geometry(), config_.params(), storage);
    j["storage"] = std::move(storage);

    ordered_json an = ordered_json::object();
    if (coresidency_)
        coresidency_->describe(an["coresidency"]);
    if (evloc_)
        evloc_->describe(an["eviction_locality"]);
    j["analyzers"] = std::move(an);
    return j;
}

trace_input load_trace(const run_config& config, trace_reader::warning_handler on_warning)
{
    const std::string& path = config.get("run.trace");
    const std::string& gen = config.get("run.gen");
    if (path.empty() == gen.empty())
        throw config_error("exactly one of run.trace (--trace) or run.gen (--gen) must be set");
    if (!path.empty())
        return {path, read_trace_file(path, std::move(on_warning))};
    const trace_spec spec = parse_trace_spec(gen);
    return {"gen:" + spec.str(), generate(spec)};
}

nlohmann::ordered_json run_records(const run_config& config, std::span<const access_record> records,
                                   const std::string& label, const std::string& trace_name)
{
    simulation sim(config);
    vector_trace_source source(records);
    sim.run(source);
    return sim.report(label, trace_name);
}

void add_normalized(nlohmann::ordered_json& report, const nlohmann::ordered_json& baseline)
{
    const replacement_ratios r = replacement_bandwidth_normalized(ledger_from_report(report), ledger_from_report(baseline));
    nlohmann::ordered_json n;
    n["baseline"] = baseline.at("label").get<std::string>().empty() ? baseline.at("policy") : baseline.at("label");
    n["install_ratio"] = r.install_ratio;
    n["promote_ratio"] = r.promote_ratio;
    n["demote_ratio"] = r.demote_ratio;
    n["total_ratio"] = r.total_ratio;
    report["normalized"] = std::move(n);
}

} // namespace dcsim
