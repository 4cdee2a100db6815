#include "dcsim/cache.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dcsim/dwp.h"
#include "dcsim/ship.h"

namespace dcsim {

// tag_store

tag_store::tag_store(const cache_geometry& geometry)
    : ways_(geometry.ways),
      num_sets_(geometry.num_sets()),
      chunks_((num_sets_ + chunk_sets - 1) / chunk_sets),
      empty_set_(ways_)
{
}

std::span<tag_entry> tag_store::set(uint64_t set_index)
{
    const uint64_t c = set_index / chunk_sets;
    auto& chunk = chunks_[c];
    if (!chunk) {
        const uint64_t sets = std::min(chunk_sets, num_sets_ - c * chunk_sets);
        chunk = std::make_unique<tag_entry[]>(sets * ways_);
    }
    return {chunk.get() + (set_index % chunk_sets) * ways_, ways_};
}

std::span<const tag_entry> tag_store::set(uint64_t set_index) const
{
    const auto& chunk = chunks_[set_index / chunk_sets];
    if (!chunk)
        return empty_set_;
    return {chunk.get() + (set_index % chunk_sets) * ways_, ways_};
}

uint64_t tag_store::valid_lines() const
{
    uint64_t n = 0;
    for_each_valid([&](uint64_t, unsigned, const tag_entry&) { ++n; });
    return n;
}

// dram_cache

dram_cache::dram_cache(const cache_geometry& geometry, std::unique_ptr<replacement_policy> policy,
                       engine_options options)
    : geometry_(geometry), policy_(std::move(policy)), options_(options), tags_(geometry)
{
    geometry_.validate();
    if (!policy_)
        throw std::invalid_argument("dram_cache needs a policy");
}

void dram_cache::apply_demotions(std::span<tag_entry> set, const policy_decision& d, event_list& events)
{
    if (!d.demotes())
        return;
    const uint8_t rrpv_cap = options_.rrpv_max;
    for (unsigned round = 0; round < d.demote_rounds; ++round) {
        unsigned aged = 0;
        for (unsigned w = 0; w < set.size(); ++w) {
            if (!(d.demote_mask & (1u << w)) || !set[w].valid)
                continue;
            if (set[w].rrpv < rrpv_cap)
                ++set[w].rrpv;
            ++aged;
        }
        if (aged == 0)
            continue;
        if (options_.demote_cost == demote_billing::per_set)
            events.push(ledger_event::demote);
        else
            for (unsigned i = 0; i < aged; ++i)
                events.push(ledger_event::demote);
    }
}

access_outcome dram_cache::access(const access_record& record)
{
    const access_context ctx{record, decompose(record.address, geometry_), make_signature(record.pc)};
    const uint64_t set_index = ctx.parts.set_index;
    std::span<tag_entry> set = tags_.set(set_index);

    access_outcome out;
    out.events.push(ledger_event::lookup);

    std::optional<unsigned> hit_way;
    for (unsigned w = 0; w < set.size(); ++w)
        if (set[w].valid && set[w].tag == ctx.parts.tag) {
            hit_way = w;
            break;
        }

    out.predicted_way = policy_->predict_way(ctx);
    if (out.predicted_way) {
        // The predicted way is probed first; anything else needs the second probe.
        if (!hit_way || *hit_way != *out.predicted_way)
            out.events.push(ledger_event::extra_way_lookup);
        if (hit_way) {
            ++counters_.predicted_hits;
            counters_.correctly_predicted += *hit_way == *out.predicted_way;
        }
    }

    ++counters_.accesses;
    ++(record.is_write() ? counters_.writes : counters_.reads);
    auto [tit, first_seen] = counters_.threads.try_emplace(record.thread_id);
    thread_counters& tc = tit->second;
    if (first_seen)
        tc.first_instret = record.instret;
    tc.last_instret = std::max(tc.last_instret, record.instret);
    ++tc.accesses;

    if (hit_way) {
        tag_entry& line = set[*hit_way];
        line.r_bit = true;
        if (record.is_write())
            line.dirty = true;
        if (policy_->on_hit(set, *hit_way, ctx))
            out.events.push(ledger_event::promote);
        out.hit = true;
        out.way_used = static_cast<int>(*hit_way);
        ++counters_.hits;
        ledger_.record(out.events.span());
        return out;
    }

    ++counters_.misses;
    ++tc.misses;
    const policy_decision d = policy_->on_miss(set, ctx);
    if (d.way >= set.size())
        throw std::logic_error(std::string(policy_->name()) + " chose way " + std::to_string(d.way)
                               + " in a " + std::to_string(set.size()) + "-way set");
    apply_demotions(set, d, out.events);

    if (d.is_bypass()) {
        out.bypassed = true;
        ++counters_.bypasses;
        out.events.push(record.is_write() ? ledger_event::mem_write : ledger_event::mem_read);
        ledger_.record(out.events.span());
        return out;
    }

    tag_entry& line = set[d.way];
    bool victim_dirty = false;
    if (line.valid) {
        const uint64_t victim_region = region_of(set_index, line.tag);
        for (auto* o : observers_)
            o->on_evict(*this, set_index, d.way, line, victim_region);
        policy_->on_evict(line, ctx);
        out.evicted = true;
        victim_dirty = line.dirty;
        ++counters_.evictions;
        if (victim_dirty)
            ++counters_.dirty_evictions;
    } else {
        out.invalid_fill = true;
        ++counters_.invalid_fills;
    }

    line = tag_entry{};
    line.valid = true;
    line.tag = ctx.parts.tag;
    line.dirty = record.is_write();
    line.rrpv = d.insert_rrpv;
    line.signature = ctx.signature;
    dwp_on_install(line, record.is_write(), record.thread_id);

    out.installed = true;
    out.evicted_dirty = victim_dirty;
    out.way_used = d.way;
    ++counters_.installs;
    out.events.push(ledger_event::install);
    if (victim_dirty)
        out.events.push(ledger_event::mem_write);
    if (!record.is_write())
        out.events.push(ledger_event::mem_read);

    policy_->on_install(d.way, ctx);
    for (auto* o : observers_)
        o->on_install(*this, set_index, d.way, ctx.parts.region_id);

    ledger_.record(out.events.span());
    return out;
}

} // namespace dcsim
