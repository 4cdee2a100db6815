#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <utility>

namespace dcsim {

/// Small fully-associative region-id -> Value table with LRU replacement.
/// Backs both the Recent-Bypass Table and the Region Install Table. A
/// capacity of zero gives a table that never hits.
template <typename Value>
class region_table {
public:
    explicit region_table(std::size_t capacity) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return index_.size(); }

    /// Lookup that refreshes recency on a hit.
    Value* lookup(uint64_t region)
    {
        auto it = index_.find(region);
        if (it == index_.end()) {
            ++misses_;
            return nullptr;
        }
        ++hits_;
        order_.splice(order_.begin(), order_, it->second);
        return &it->second->second;
    }

    /// Lookup without touching recency or statistics.
    std::optional<Value> peek(uint64_t region) const
    {
        auto it = index_.find(region);
        if (it == index_.end())
            return std::nullopt;
        return it->second->second;
    }

    bool contains(uint64_t region) const { return index_.count(region) != 0; }

    /// Insert or overwrite, making the entry most recent. Returns the region
    /// evicted to make room, if any.
    std::optional<uint64_t> insert(uint64_t region, Value value)
    {
        if (capacity_ == 0)
            return std::nullopt;
        if (auto it = index_.find(region); it != index_.end()) {
            it->second->second = std::move(value);
            order_.splice(order_.begin(), order_, it->second);
            return std::nullopt;
        }
        std::optional<uint64_t> evicted;
        if (index_.size() == capacity_) {
            evicted = order_.back().first;
            index_.erase(order_.back().first);
            order_.pop_back();
        }
        order_.emplace_front(region, std::move(value));
        index_.emplace(region, order_.begin());
        return evicted;
    }

    uint64_t hits() const { return hits_; }
    uint64_t misses() const { return misses_; }

private:
    using entry = std::pair<uint64_t, Value>;

    std::size_t capacity_;
    std::list<entry> order_;
    std::unordered_map<uint64_t, typename std::list<entry>::iterator> index_;
    uint64_t hits_ = 0;
    uint64_t misses_ = 0;
};

} // namespace dcsim
