#include <doctest.h>

#include <sstream>

#include "dcsim/config.h"
#include "dcsim/generators.h"
#include "dcsim/report.h"
#include "dcsim/simulation.h"
#include "dcsim/storage_audit.h"
#include "dcsim/sweep.h"

using namespace dcsim;

namespace {

run_config desk_config(const std::string& policy)
{
    run_config c;
    c.set("cache.capacity", "16KB");
    c.set("policy.name", policy);
    c.set("run.gen", "region_stream:passes=4");
    c.set("run.analyzers", "coresidency,evloc");
    return c;
}

} // namespace

TEST_CASE("config defaults, overlay and dump round trip")
{
    run_config c;
    CHECK(c.geometry().capacity_bytes == (uint64_t{2} << 30));
    CHECK(c.policy_name() == "rrip-aob");
    CHECK(c.params().shct_init == 1);

    std::istringstream ini("[cache]\nways = 2\ncapacity = 1GB\n[policy]\nname = accord\n");
    c.load_stream(ini);
    CHECK(c.geometry().ways == 2);
    CHECK(c.policy_name() == "accord");
    c.set_assignment("policy.name = etr"); // flags come after the file
    CHECK(c.policy_name() == "etr");

    run_config back;
    std::istringstream dumped(c.dump());
    back.load_stream(dumped);
    CHECK(back == c);

    std::istringstream bad("[cache]\nbogus = 1\n");
    CHECK_THROWS_AS(c.load_stream(bad), config_error);
    CHECK_THROWS_AS(c.set("nosection", "1"), config_error);
    c.set("cache.ways", "x");
    CHECK_THROWS_AS(c.geometry(), config_error);
    CHECK_THROWS_AS(run_config{}.set_assignment("novalue"), config_error);
}

TEST_CASE("storage audit constants")
{
    const policy_params p;
    const auto s = sram_storage(p);
    CHECK(s.rbt_bytes == 512);
    CHECK(s.shct_bytes == 1536);
    CHECK(s.dwp_bits == 24);
    const auto m = metadata_bits(cache_geometry{});
    CHECK(m.tag == 5);
    CHECK(m.total() == 23);
    CHECK(m.fits());
    auto two_way = cache_geometry::make(uint64_t{2} << 30, 64, 2);
    CHECK(metadata_bits(two_way).fits());
}

TEST_CASE("reports: totals, stable bytes, CSV header")
{
    const auto cfg = desk_config("etr");
    const auto trace = load_trace(cfg);
    const auto a = run_records(cfg, trace.records, "x", trace.name);
    const auto b = run_records(cfg, trace.records, "x", trace.name);
    CHECK(a.dump() == b.dump());
    CHECK(a["hits"].get<uint64_t>() + a["misses"].get<uint64_t>() == a["accesses"].get<uint64_t>());
    CHECK(a["schema"] == "dcsim-report/1");
    CHECK(a["analyzers"]["coresidency"]["samples"] == 0);
    CHECK(a["policy_state"]["rbt_entries"] == 128);

    const std::vector<nlohmann::ordered_json> one{a};
    const std::string csv = emit_csv(one);
    CHECK(csv.rfind("label,metric,value\n", 0) == 0);
    CHECK(csv.find("\nx,ledger.demote,1\n") != std::string::npos);
    CHECK(csv.find("\nx,threads.0.mpki,") != std::string::npos);

    const auto parsed = parse_jsonl(emit_jsonl(one));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].dump() == a.dump());
    CHECK(ledger_from_report(a).demotes() == 1);
    CHECK_THROWS(parse_jsonl("{\"schema\":\"other\"}\n"));
    CHECK_THROWS(parse_jsonl("not json\n"));
}

TEST_CASE("normalization and baseline lookup")
{
    const auto cfg = desk_config("rrip-aob");
    const auto trace = load_trace(cfg);
    auto base_cfg = cfg;
    base_cfg.set("policy.name", "always");
    std::vector<nlohmann::ordered_json> reports{run_records(base_cfg, trace.records, "", trace.name),
                                                run_records(cfg, trace.records, "", trace.name)};
    CHECK(find_baseline(reports, "always") == 0);
    CHECK_THROWS_AS(find_baseline(reports, "missing"), config_error);
    add_normalized(reports[1], reports[0]);
    CHECK(reports[1]["normalized"]["install_ratio"].get<double>() == doctest::Approx(64.0 / 512.0));
    CHECK(reports[1]["normalized"]["demote_ratio"].get<double>() == doctest::Approx(256.0 / 512.0));
    const std::string table = emit_table(reports);
    CHECK(table.find("rrip-aob") != std::string::npos);
    CHECK(table.find("dem/B") != std::string::npos);
}

TEST_CASE("sweep grid order and determinism")
{
    const auto axes = std::vector<grid_axis>{parse_grid_axis("policy.name=always,bypass90,rrip-aob,etr"),
                                             parse_grid_axis("cache.region=1024,2048,4096")};
    const auto points = expand_grid(axes);
    REQUIRE(points.size() == 12);
    CHECK(points[0][1].second == "1024");
    CHECK(points[1][1].second == "2048");
    CHECK(points[3][0].second == "bypass90");
    CHECK_THROWS_AS(parse_grid_axis("run.trace=a,b"), config_error);
    CHECK_THROWS_AS(parse_grid_axis("bogus.key=1"), config_error);

    auto cfg = desk_config("always");
    cfg.set("run.gen", "mixed_reuse:length=5000,hot=128");
    const auto trace = load_trace(cfg);
    sweep_options serial;
    serial.baseline_policy = "always";
    sweep_options parallel = serial;
    parallel.jobs = 4;
    const auto a = run_sweep(cfg, axes, trace.records, trace.name, serial);
    const auto b = run_sweep(cfg, axes, trace.records, trace.name, parallel);
    CHECK(emit_jsonl(a) == emit_jsonl(b));
    CHECK(emit_csv(a) == emit_csv(b));
    CHECK(a[0]["label"] == "policy.name=always,cache.region=1024");
    CHECK(a[0]["normalized"]["install_ratio"] == 1.0);

    const auto three = run_sweep(cfg, std::vector<grid_axis>{parse_grid_axis("policy.name=always,etr,rrip-aob")},
                                 trace.records, trace.name, parallel);
    std::istringstream lines(emit_jsonl(three));
    std::string line;
    int n = 0;
    while (std::getline(lines, line))
        ++n;
    CHECK(n == 3);

    auto bad = cfg;
    CHECK_THROWS_AS(run_sweep(bad, std::vector<grid_axis>{parse_grid_axis("policy.name=always,nosuch")},
                              trace.records, trace.name, serial),
                    config_error);
}

TEST_CASE("trace selection")
{
    run_config c;
    CHECK_THROWS_AS(load_trace(c), config_error);
    c.set("run.gen", "thrash_mix");
    c.set("run.trace", "x");
    CHECK_THROWS_AS(load_trace(c), config_error);
    CHECK_THROWS_AS(analyzer_selection::parse("coresidency,bogus"), config_error);
    const auto s = analyzer_selection::parse("evloc");
    CHECK(s.eviction_locality);
    CHECK(!s.coresidency);
}
