#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

namespace dcsim {

/// Every event costs one line-sized transaction. MemRead/MemWrite are on the
/// main-memory bus, everything else on the DRAM-cache bus.
enum class ledger_event : uint8_t {
    lookup,
    install,
    promote,
    demote,
    mem_read,
    mem_write,
    extra_way_lookup,
};

inline constexpr std::size_t ledger_event_count = 7;

std::string_view to_string(ledger_event e);

class bandwidth_ledger {
public:
    void record(ledger_event e) { ++counts_[static_cast<std::size_t>(e)]; }
    void record(ledger_event e, uint64_t n) { counts_[static_cast<std::size_t>(e)] += n; }
    void record(std::span<const ledger_event> events)
    {
        for (auto e : events)
            record(e);
    }

    uint64_t count(ledger_event e) const { return counts_[static_cast<std::size_t>(e)]; }
    uint64_t lookups() const { return count(ledger_event::lookup); }
    uint64_t installs() const { return count(ledger_event::install); }
    uint64_t promotes() const { return count(ledger_event::promote); }
    uint64_t demotes() const { return count(ledger_event::demote); }
    uint64_t mem_reads() const { return count(ledger_event::mem_read); }
    uint64_t mem_writes() const { return count(ledger_event::mem_write); }
    uint64_t extra_way_lookups() const { return count(ledger_event::extra_way_lookup); }

    /// Transactions on the DRAM-cache bus.
    uint64_t cache_transactions() const
    {
        return lookups() + installs() + promotes() + demotes() + extra_way_lookups();
    }

    bandwidth_ledger& operator+=(const bandwidth_ledger& o)
    {
        for (std::size_t i = 0; i < ledger_event_count; ++i)
            counts_[i] += o.counts_[i];
        return *this;
    }

    friend bool operator==(const bandwidth_ledger&, const bandwidth_ledger&) = default;

private:
    std::array<uint64_t, ledger_event_count> counts_{};
};

/// Replacement bandwidth of a run expressed in units of the baseline's
/// install count.
struct replacement_ratios {
    double install_ratio = 0;
    double promote_ratio = 0;
    double demote_ratio = 0;
    double total_ratio = 0;
};

/// Throws std::domain_error when the baseline has no installs.
replacement_ratios replacement_bandwidth_normalized(const bandwidth_ledger& ledger,
                                                    const bandwidth_ledger& baseline);

/// Fixed-capacity event list attached to one access. The worst case is a
/// classic-RRIP miss with three demote rounds billed per way.
class event_list {
public:
    static constexpr std::size_t capacity = 16;

    void push(ledger_event e)
    {
        if (size_ == capacity)
            throw std::length_error("event_list overflow");
        events_[size_++] = e;
    }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    ledger_event operator[](std::size_t i) const { return events_[i]; }
    const ledger_event* begin() const { return events_.data(); }
    const ledger_event* end() const { return events_.data() + size_; }
    std::span<const ledger_event> span() const { return {events_.data(), size_}; }

    std::size_t count(ledger_event e) const
    {
        std::size_t n = 0;
        for (auto x : *this)
            n += x == e;
        return n;
    }

private:
    std::array<ledger_event, capacity> events_{};
    std::size_t size_ = 0;
};

} // namespace dcsim
