#include <doctest.h>

#include <cmath>

#include "dcsim/accord.h"
#include "dcsim/baseline_policies.h"
#include "dcsim/dwp.h"
#include "dcsim/etr.h"
#include "dcsim/rrip.h"
#include "dcsim/ship.h"
#include "harness.h"

using namespace dcsim;

namespace {

access_record rd(uint64_t addr, uint64_t pc = 0x400000, uint32_t thread = 0)
{
    return {thread, access_kind::read, addr, pc, 0};
}
access_record wr(uint64_t addr, uint32_t thread = 0) { return {thread, access_kind::write, addr, 0, 0}; }

} // namespace

TEST_CASE("decision tables")
{
    const auto rows = testkit::load_decision_table(DCSIM_TEST_DATA "/decision_tables.tsv");
    CHECK(rows.size() == 179);
    for (const auto& r : rows) {
        CAPTURE(r.line);
        CAPTURE(r.policy);
        CAPTURE(r.state);
        CHECK_MESSAGE(testkit::check_row(r).empty(), testkit::check_row(r));
    }
}

TEST_CASE("rrip params validation")
{
    CHECK_THROWS_AS((rrip_params{3, 4}.validate()), config_error);
    CHECK_THROWS_AS((rrip_params{0, 0}.validate()), config_error);
    CHECK_NOTHROW((rrip_params{3, 3}.validate()));
}

TEST_CASE("classic RRIP ages the whole set until a distant line appears")
{
    auto cache = testkit::small_cache("rrip2", 4, 2);
    cache->access(rd(0));
    cache->access(rd(4 * 64));
    cache->access(rd(0)); // way 0 -> rrpv 0
    const auto o = cache->access(rd(8 * 64));
    CHECK(o.installed);
    CHECK(o.way_used == 1);
    CHECK(o.events.count(ledger_event::demote) == 1); // one round, billed per set
    CHECK(cache->tags().set(0)[0].rrpv == 1);
    CHECK(cache->tags().set(0)[1].rrpv == 2);
}

TEST_CASE("RBT is LRU with 4-byte entries")
{
    recent_bypass_table rbt(2);
    CHECK(rbt.storage_bytes() == 8);
    CHECK(recent_bypass_table().storage_bytes() == 512);
    rbt.insert(1, region_decision::bypass);
    rbt.insert(2, region_decision::install);
    CHECK(rbt.lookup(1) != nullptr); // 1 becomes most recent
    CHECK(rbt.insert(3, region_decision::bypass) == std::optional<uint64_t>(2));
    CHECK(!rbt.contains(2));
    CHECK(*rbt.peek(1) == region_decision::bypass);
    rbt.insert(1, region_decision::install);
    CHECK(*rbt.peek(1) == region_decision::install);
    CHECK(rbt.size() == 2);
    region_table<int> none(0);
    none.insert(5, 1);
    CHECK(none.lookup(5) == nullptr);
}

TEST_CASE("ETR follower repeats the representative without touching RRPV")
{
    auto cache = testkit::small_cache("etr", 256, 1);
    for (uint64_t i = 0; i < 64; ++i)
        cache->access(rd(i * 64));
    // Region 4 conflicts with region 0 (256 sets * 64 B = 16 KB = 4 regions).
    const auto rep = cache->access(rd(16384));
    CHECK(rep.bypassed);
    CHECK(rep.events.count(ledger_event::demote) == 1);
    for (uint64_t i = 1; i < 64; ++i) {
        const auto f = cache->access(rd(16384 + i * 64));
        CHECK(f.bypassed);
        CHECK(f.events.count(ledger_event::demote) == 0);
        CHECK(cache->tags().set(i)[0].rrpv == 2);
    }
    CHECK(cache->tags().set(0)[0].rrpv == 3);
    auto& etr = dynamic_cast<etr_policy&>(cache->policy());
    CHECK(etr.representative_decisions() == 1);
    CHECK(etr.follower_decisions() == 63);
}

TEST_CASE("ETR with a zero-entry RBT degenerates to its inner policy")
{
    auto a = testkit::small_config("etr", 64, 1);
    a.set("etr.rbt_entries", "0");
    auto etr = make_cache(a);
    auto aob = testkit::small_cache("rrip-aob", 64, 1);
    for (uint64_t i = 0; i < 5000; ++i) {
        const uint64_t addr = ((i * 2654435761u) % 512) * 64;
        REQUIRE(etr->access(rd(addr)).hit == aob->access(rd(addr)).hit);
    }
    CHECK(etr->ledger() == aob->ledger());
}

TEST_CASE("SHiP signatures")
{
    CHECK(make_signature(0) == pcless_signature);
    CHECK(make_signature(0x400512) < 4096);
    const uint64_t pc = 0x400512;
    const uint16_t expect = static_cast<uint16_t>(((pc >> 2) & 0xfff) ^ ((pc >> 14) & 0xfff) ^ ((pc >> 26) & 0xfff));
    CHECK(make_signature(pc) == expect);
    CHECK(make_signature(0x400100) != make_signature(0x400200));
}

TEST_CASE("SHCT training saturates and keeps the PC-less counter separate")
{
    shct_table t;
    CHECK(t.storage_bytes() == 1536);
    CHECK(t.counter(7) == 1);
    tag_entry dead;
    dead.signature = 7;
    t.train(dead);
    CHECK(t.counter(7) == 0);
    CHECK(t.predict(7) == reuse_priority::low);
    t.train(dead);
    CHECK(t.counter(7) == 0);
    tag_entry live = dead;
    live.r_bit = true;
    for (int i = 0; i < 20; ++i)
        t.train(live);
    CHECK(t.counter(7) == 7);
    tag_entry wb;
    wb.signature = pcless_signature;
    t.train(wb);
    CHECK(t.counter(pcless_signature) == 0);
    CHECK(t.counter(0) == 1);
    const auto h = t.histogram();
    CHECK(h.size() == 8);
    CHECK(h[1] == 4095);
    CHECK(h[7] == 1);
}

TEST_CASE("SHiP-AOB low-priority bypass leaves state alone")
{
    policy_params p;
    p.force_install_pct = 0;
    auto policy = std::make_unique<ship_aob_policy>(rrip_params{}, p, 1);
    auto* ship = policy.get();
    dram_cache cache(cache_geometry::with_sets(4, 1), std::move(policy));
    cache.access(rd(0, 0x400100));
    ship->shct().set_counter(make_signature(0x400200), 0);
    const auto o = cache.access(rd(4 * 64, 0x400200));
    CHECK(o.bypassed);
    CHECK(o.events.count(ledger_event::demote) == 0);
    CHECK(cache.tags().set(0)[0].rrpv == 2);
    const auto h = cache.access(rd(4 * 64, 0x400100));
    CHECK(h.bypassed);
    CHECK(h.events.count(ledger_event::demote) == 1);
}

TEST_CASE("SHiP-AOB installs low-priority lines distant")
{
    policy_params p;
    auto policy = std::make_unique<ship_aob_policy>(rrip_params{}, p, 1);
    policy->shct().set_counter(make_signature(0x400200), 0);
    dram_cache cache(cache_geometry::with_sets(4, 1), std::move(policy));
    cache.access(rd(0, 0x400200));
    CHECK(cache.tags().set(0)[0].rrpv == 3);
    cache.access(rd(64, 0x400100));
    CHECK(cache.tags().set(1)[0].rrpv == 2);
}

TEST_CASE("PWS preferred way and GWS")
{
    address_parts p{5, 0b1011, 3 << 6};
    CHECK(preferred_way(p) == ((3u ^ 3u) & 1u));
    CHECK(pws_select_way(p, 0.10, 0.85) == preferred_way(p));
    CHECK(pws_select_way(p, 0.90, 0.85) == 1 - preferred_way(p));

    way_steering s(4, 0.85, 3);
    const address_parts a{0, 1, 10};
    const unsigned w = s.gws(a);
    for (int i = 0; i < 50; ++i)
        CHECK(s.gws(a) == w);
    CHECK(s.predict(a).predicted_way == w);
    CHECK(s.predict(a).source == way_prediction::source_kind::region_last_way);
    CHECK(s.predict(address_parts{0, 0, 999}).source == way_prediction::source_kind::preferred_way);
}

TEST_CASE("ACCORD installs only into the steered way")
{
    auto cache = testkit::small_cache("accord", 64, 2);
    auto& accord = dynamic_cast<accord_policy&>(cache->policy());
    for (uint64_t i = 0; i < 2000; ++i) {
        const auto r = rd(((i * 7919) % 4096) * 64);
        const auto parts = decompose(r.address, cache->geometry());
        const auto o = cache->access(r);
        if (o.installed)
            CHECK(static_cast<unsigned>(o.way_used) == *accord.steering().rit().peek(parts.region_id));
    }
}

TEST_CASE("ACCORD+AOB decides on the steered way's own RRPV")
{
    auto cache = testkit::small_cache("accord-aob", 4, 2);
    auto& policy = dynamic_cast<accord_aob_policy&>(cache->policy());
    for (uint64_t i = 0; i < 3000; ++i) {
        const auto r = rd(((i * 40503) % 97) * 64 * 4);
        const auto parts = decompose(r.address, cache->geometry());
        const auto before = cache->tags().set(parts.set_index);
        const std::vector<tag_entry> snapshot(before.begin(), before.end());
        const auto o = cache->access(r);
        if (o.hit)
            continue;
        const unsigned way = *policy.steering().rit().peek(parts.region_id);
        const bool install = !snapshot[way].valid || snapshot[way].rrpv >= rrpv_distant;
        CHECK(o.installed == install);
        if (o.installed)
            CHECK(static_cast<unsigned>(o.way_used) == way);
        else
            CHECK(o.events.count(ledger_event::demote) == 1);
    }
}

TEST_CASE("ACCORD+ETR demotes only the steered way")
{
    auto cache = testkit::small_cache("accord-etr", 4, 2);
    for (uint64_t i = 0; i < 3000; ++i) {
        const auto o = cache->access(rd(((i * 40503) % 97) * 64 * 4));
        if (o.bypassed)
            CHECK(o.events.count(ledger_event::demote) <= 1);
    }
}

TEST_CASE("DWP counters")
{
    dwp_state d;
    CHECK(d.storage_bits() == 24);
    CHECK(!d.allocate_writes(3));
    tag_entry line;
    dwp_on_install(line, true, 3);
    CHECK(line.wa_bit);
    CHECK(line.thread_id == 3);
    line.r_bit = true;
    for (int i = 0; i < 10; ++i)
        d.on_evict(line);
    CHECK(d.counter(3) == 7);
    CHECK(d.allocate_writes(3));
    CHECK(d.counter(11) == 7); // threads fold modulo the table
    line.r_bit = false;
    d.on_evict(line);
    CHECK(d.counter(3) == 6);
    tag_entry read_fill;
    dwp_on_install(read_fill, false, 3);
    d.on_evict(read_fill);
    CHECK(d.counter(3) == 6);
    CHECK_THROWS_AS(dwp_state(8, 3, 8), config_error);
}

TEST_CASE("DWP forces write installs through the inner policy")
{
    auto cfg = testkit::small_config("etr", 4, 1);
    cfg.set("policy.dwp", "true");
    cfg.set("dwp.init", "7");
    auto cache = make_cache(cfg);
    CHECK(cache->policy().name() == "etr+dwp");
    cache->access(rd(0));
    const auto o = cache->access(wr(4 * 64));
    CHECK(o.installed);
    auto& dwp = dynamic_cast<dwp_policy&>(cache->policy());
    CHECK(dwp.overrides() == 1);
    auto& etr = dynamic_cast<etr_policy&>(dwp.inner());
    CHECK(*etr.rbt().peek(decompose(4 * 64, cache->geometry()).region_id) == region_decision::install);
}

TEST_CASE("set dueling layout and PSEL")
{
    duel_state d(1024, 32, 10);
    CHECK(d.psel() == 511);
    CHECK(!d.followers_bypass());
    unsigned install = 0, bypass = 0;
    for (uint64_t s = 0; s < 1024; ++s) {
        install += d.role_of(s) == duel_state::role::install_leader;
        bypass += d.role_of(s) == duel_state::role::bypass_leader;
    }
    CHECK(install == 32);
    CHECK(bypass == 32);
    CHECK(d.role_of(0) == duel_state::role::install_leader);
    CHECK(d.role_of(16) == duel_state::role::bypass_leader);
    d.record_miss(0);
    CHECK(d.psel() == 512);
    CHECK(d.followers_bypass());
    d.record_miss(16);
    d.record_miss(16);
    CHECK(d.psel() == 510);
    d.set_psel(5000);
    CHECK(d.psel() == 1023);
    duel_state tiny(4, 32, 10);
    CHECK(tiny.leaders_per_policy() == 1);
}

TEST_CASE("Bypass-90 installs about one miss in ten")
{
    auto cache = testkit::small_cache("bypass90", 64, 1);
    for (uint64_t i = 0; i < 64; ++i)
        cache->access(rd(i * 64));
    auto& p = dynamic_cast<bypass90_policy&>(cache->policy());
    for (uint64_t i = 0; i < 20000; ++i)
        cache->access(rd((64 + i) * 64));
    const double frac = static_cast<double>(p.installs_decided())
        / static_cast<double>(p.installs_decided() + p.bypasses_decided());
    CHECK(frac == doctest::Approx(0.10).epsilon(0.1));
    CHECK(p.bypasses_decided() > 0);
}

TEST_CASE("factory rejects what it can't build")
{
    CHECK_THROWS_AS(testkit::small_cache("nosuch", 4, 1), config_error);
    CHECK_THROWS_AS(testkit::small_cache("accord", 4, 1), config_error);
    CHECK_THROWS_AS(testkit::small_cache("rrip2", 4, 1), config_error);
    CHECK_THROWS_AS(testkit::small_cache("random2", 4, 1), config_error);
    CHECK_THROWS_AS(testkit::small_cache("lru2", 4, 1), config_error);
    for (const auto& n : policy_names())
        CHECK_NOTHROW(testkit::small_cache(n, 4, 2));
}
