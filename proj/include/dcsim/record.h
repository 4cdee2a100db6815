#pragma once

#include <cstdint>

namespace dcsim {

enum class access_kind : uint8_t { read, write };

/// One request arriving at the DRAM cache. Writes are L3 writebacks and
/// usually carry pc == 0.
struct access_record {
    uint32_t thread_id = 0;
    access_kind kind = access_kind::read;
    uint64_t address = 0;
    uint64_t pc = 0;
    uint64_t instret = 0;

    bool is_write() const { return kind == access_kind::write; }

    friend bool operator==(const access_record&, const access_record&) = default;
};

} // namespace dcsim
