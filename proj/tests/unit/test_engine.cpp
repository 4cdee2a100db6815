#include <doctest.h>

#include <map>
#include <set>

#include "dcsim/baseline_policies.h"
#include "dcsim/cache.h"
#include "dcsim/config.h"
#include "naive_sim.h"
#include "harness.h"
#include "random_trace.h"

using namespace dcsim;

namespace {

access_record rd(uint64_t addr, uint32_t thread = 0, uint64_t instret = 0)
{
    return {thread, access_kind::read, addr, 0x400000, instret};
}
access_record wr(uint64_t addr, uint32_t thread = 0, uint64_t instret = 0)
{
    return {thread, access_kind::write, addr, 0, instret};
}

std::vector<ledger_event> events(const access_outcome& o) { return {o.events.begin(), o.events.end()}; }

using E = ledger_event;

const std::vector<std::string> all_policies_1way = {"always", "bypass90", "bab", "rrip-aob", "etr", "ship-aob",
                                                    "ship-etr"};
const std::vector<std::string> all_policies_2way = {"always",  "lru2",  "random2",  "bypass90", "bab",
                                                    "rrip2",   "rrip-aob", "etr",   "ship-aob", "ship-etr",
                                                    "accord", "accord-aob", "accord-etr"};

} // namespace

TEST_CASE("cold miss, re-read and conflict under Always-Install")
{
    auto cache = testkit::small_cache("always", 4, 1);
    const auto a = cache->access(rd(0x0));
    CHECK(!a.hit);
    CHECK(a.installed);
    CHECK(events(a) == std::vector<E>{E::lookup, E::install, E::mem_read});

    const auto b = cache->access(rd(0x0));
    CHECK(b.hit);
    CHECK(events(b) == std::vector<E>{E::lookup});

    const auto c = cache->access(rd(4 * 64));
    CHECK(!c.hit);
    CHECK(c.evicted);
    CHECK(!c.evicted_dirty);
    CHECK(events(c) == std::vector<E>{E::lookup, E::install, E::mem_read});
}

TEST_CASE("writes: install dirty, hit folds into lookup, dirty eviction writes back")
{
    auto cache = testkit::small_cache("always", 4, 1);
    const auto w = cache->access(wr(0x40));
    CHECK(events(w) == std::vector<E>{E::lookup, E::install});
    const auto line = cache->tags().set(1)[0];
    CHECK(line.dirty);
    CHECK(line.wa_bit);

    const auto h = cache->access(wr(0x40));
    CHECK(h.hit);
    CHECK(events(h) == std::vector<E>{E::lookup});

    const auto e = cache->access(rd(0x40 + 4 * 64));
    CHECK(e.evicted_dirty);
    CHECK(events(e) == std::vector<E>{E::lookup, E::install, E::mem_write, E::mem_read});
}

TEST_CASE("bypassed write goes to memory")
{
    auto cache = testkit::small_cache("rrip-aob", 4, 1);
    cache->access(rd(0x0));
    const auto b = cache->access(wr(4 * 64));
    CHECK(b.bypassed);
    CHECK(events(b) == std::vector<E>{E::lookup, E::demote, E::mem_write});
}

TEST_CASE("hit sets the R bit and promotes only when RRPV changes")
{
    auto cache = testkit::small_cache("rrip-aob", 4, 1);
    cache->access(rd(0x0));
    CHECK(!cache->tags().set(0)[0].r_bit);
    const auto h1 = cache->access(rd(0x0));
    CHECK(events(h1) == std::vector<E>{E::lookup, E::promote});
    CHECK(cache->tags().set(0)[0].r_bit);
    CHECK(cache->tags().set(0)[0].rrpv == 0);
    const auto h2 = cache->access(rd(0x0));
    CHECK(events(h2) == std::vector<E>{E::lookup});
}

TEST_CASE("1000 reads of one address")
{
    auto cache = testkit::small_cache("always", 1024, 1);
    for (uint64_t i = 0; i < 1000; ++i)
        cache->access(rd(0x1234, 0, i));
    CHECK(cache->counters().hits == 999);
    CHECK(cache->counters().misses == 1);
}

TEST_CASE("per-thread instruction deltas")
{
    auto cache = testkit::small_cache("always", 16, 1);
    cache->access(rd(0x0, 0, 100));
    cache->access(rd(0x40, 1, 5));
    cache->access(rd(0x80, 0, 2100));
    const auto& t = cache->counters().threads;
    CHECK(t.at(0).instructions() == 2000);
    CHECK(t.at(0).misses == 2);
    CHECK(t.at(1).instructions() == 0);
}

TEST_CASE("2-way demotion billing")
{
    for (auto billing : {demote_billing::per_set, demote_billing::per_way}) {
        engine_options opts;
        opts.demote_cost = billing;
        dram_cache cache(cache_geometry::with_sets(4, 2), std::make_unique<rrip_aob_policy>(rrip_params{}), opts);
        cache.access(rd(0));
        cache.access(rd(4 * 64));
        const auto b = cache.access(rd(8 * 64));
        CHECK(b.bypassed);
        CHECK(b.events.count(E::demote) == (billing == demote_billing::per_set ? 1u : 2u));
    }
}

TEST_CASE("invariants over random traces for every policy")
{
    for (unsigned ways : {1u, 2u}) {
        const auto& names = ways == 1 ? all_policies_1way : all_policies_2way;
        for (const auto& name : names) {
            for (bool dwp : {false, true}) {
                for (uint64_t seed = 1; seed <= 12; ++seed) {
                    CAPTURE(name);
                    CAPTURE(ways);
                    CAPTURE(dwp);
                    CAPTURE(seed);
                    const uint64_t sets = 8;
                    const auto trace = testgen::random_trace(seed, testgen::shape_for(seed, sets * ways));
                    auto cfg = testkit::small_config(name, sets, ways, seed);
                    if (dwp)
                        cfg.set("policy.dwp", "true");
                    auto cache = make_cache(cfg);

                    bandwidth_ledger summed;
                    uint64_t dirty_evictions = 0, evict_writes = 0, installs = 0, bypasses = 0;
                    for (const auto& r : trace) {
                        const auto o = cache->access(r);
                        summed.record(o.events.span());
                        REQUIRE(o.events.count(E::lookup) == 1);
                        if (o.hit) {
                            REQUIRE(!o.installed);
                            REQUIRE(!o.bypassed);
                            REQUIRE(o.events.count(E::install) == 0);
                        } else {
                            REQUIRE(o.installed != o.bypassed);
                        }
                        installs += o.installed;
                        bypasses += o.bypassed;
                        dirty_evictions += o.evicted_dirty;
                        if (o.installed)
                            evict_writes += o.events.count(E::mem_write);
                        // AOB-style policies demote at most once per way per miss.
                        if (name != "rrip2")
                            REQUIRE(o.events.count(E::demote) <= 1);
                    }
                    const auto& c = cache->counters();
                    CHECK(c.hits + c.misses == trace.size());
                    CHECK(c.misses == installs + bypasses);
                    CHECK(c.installs == installs);
                    CHECK(summed == cache->ledger());
                    CHECK(cache->ledger().installs() == installs);
                    CHECK(evict_writes == dirty_evictions);
                    CHECK(cache->ledger().lookups() == trace.size());
                    if (name == "always" || name == "lru2") {
                        CHECK(cache->ledger().promotes() == 0);
                        CHECK(cache->ledger().demotes() == 0);
                        if (!dwp)
                            CHECK(cache->ledger().installs() == c.misses);
                    }
                    if (name == "rrip-aob" || name == "etr" || name == "ship-aob" || name == "ship-etr"
                        || name == "accord-aob" || name == "accord-etr")
                        CHECK(cache->ledger().demotes() <= c.misses);

                    // Tag store sanity: RRPV in range, no duplicate tags in a set.
                    for (uint64_t s = 0; s < sets; ++s) {
                        const auto set = cache->tags().set(s);
                        std::set<uint64_t> tags;
                        for (const auto& e : set) {
                            REQUIRE(e.rrpv <= rrpv_distant);
                            if (e.valid)
                                REQUIRE(tags.insert(e.tag).second);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("Always-Install matches the naive simulator")
{
    for (unsigned ways : {1u, 2u}) {
        for (uint64_t sets : {1u, 2u, 4u, 8u}) {
            for (uint64_t seed = 100; seed < 140; ++seed) {
                CAPTURE(ways);
                CAPTURE(sets);
                CAPTURE(seed);
                auto shape = testgen::shape_for(seed, sets * ways);
                shape.records = 10000;
                const auto trace = testgen::random_trace(seed, shape);
                auto cache = testkit::small_cache(ways == 1 ? "always" : "lru2", sets, ways);
                std::vector<bool> hits;
                for (const auto& r : trace)
                    hits.push_back(cache->access(r).hit);
                oracle::shape os;
                os.sets = sets;
                os.ways = ways;
                const auto ref = oracle::simulate(oracle::scheme::always, trace, os);
                REQUIRE(hits == ref.hit_sequence);
                CHECK(cache->ledger().mem_writes() == ref.mem_writes);
                CHECK(cache->ledger().mem_reads() == ref.mem_reads);
            }
        }
    }
}

TEST_CASE("RRIP-AOB and ETR match the naive simulator")
{
    for (const char* name : {"rrip-aob", "etr"}) {
        for (unsigned ways : {1u, 2u}) {
            for (uint64_t seed = 200; seed < 230; ++seed) {
                CAPTURE(name);
                CAPTURE(ways);
                CAPTURE(seed);
                const uint64_t sets = 8;
                auto shape = testgen::shape_for(seed, sets * ways);
                shape.records = 5000;
                const auto trace = testgen::random_trace(seed, shape);
                auto cfg = testkit::small_config(name, sets, ways);
                cfg.set("etr.rbt_entries", "4");
                cfg.set("cache.region", "256");
                auto cache = make_cache(cfg);
                std::vector<bool> hits;
                for (const auto& r : trace)
                    hits.push_back(cache->access(r).hit);
                oracle::shape os;
                os.sets = sets;
                os.ways = ways;
                os.region_bytes = 256;
                os.rbt_entries = 4;
                const auto ref = oracle::simulate(
                    std::string(name) == "etr" ? oracle::scheme::etr : oracle::scheme::rrip_aob, trace, os);
                REQUIRE(hits == ref.hit_sequence);
                const auto& l = cache->ledger();
                CHECK(l.installs() == ref.installs);
                CHECK(l.promotes() == ref.promotes);
                CHECK(l.demotes() == ref.demotes);
                CHECK(l.mem_reads() == ref.mem_reads);
                CHECK(l.mem_writes() == ref.mem_writes);
            }
        }
    }
}

TEST_CASE("same seed, same run")
{
    for (const auto& name : all_policies_2way) {
        const auto trace = testgen::random_trace(9, testgen::shape_for(9, 32));
        auto a = testkit::small_cache(name, 16, 2, 77);
        auto b = testkit::small_cache(name, 16, 2, 77);
        for (const auto& r : trace)
            REQUIRE(events(a->access(r)) == events(b->access(r)));
        CHECK(a->ledger() == b->ledger());
    }
}
