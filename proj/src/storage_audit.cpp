#include "dcsim/storage_audit.h"

#include "dcsim/dwp.h"
#include "dcsim/etr.h"
#include "dcsim/ship.h"

namespace dcsim {

line_metadata_bits metadata_bits(const cache_geometry& g)
{
    line_metadata_bits m;
    const unsigned mem = log2_exact(g.memory_bytes);
    const unsigned indexed = log2_exact(g.line_bytes * g.num_sets());
    m.tag = mem > indexed ? mem - indexed : 0;
    m.signature = signature_bits;
    m.rrpv = rrpv_bits;
    return m;
}

sram_budget sram_storage(const policy_params& p)
{
    sram_budget b;
    b.rbt_bytes = recent_bypass_table(p.rbt_entries).storage_bytes();
    // RIT entries hold a region tag plus one way bit; same 4-byte slot as the RBT.
    b.rit_bytes = std::size_t{p.rit_entries} * recent_bypass_table::entry_bytes;
    b.shct_bytes = shct_table(p.shct_entries, p.shct_bits, 0).storage_bytes();
    b.dwp_bits = dwp_state(p.dwp_threads, p.dwp_bits, 0).storage_bits();
    return b;
}

void describe_storage(const cache_geometry& g, const policy_params& p, nlohmann::ordered_json& out)
{
    const line_metadata_bits m = metadata_bits(g);
    const sram_budget s = sram_storage(p);
    out["line_metadata_bits"] = m.total();
    out["ecc_budget_bits"] = ecc_metadata_budget_bits;
    out["tag_bits"] = m.tag;
    out["rbt_bytes"] = s.rbt_bytes;
    out["rit_bytes"] = s.rit_bytes;
    out["shct_bytes"] = s.shct_bytes;
    out["dwp_bits"] = s.dwp_bits;
}

} // namespace dcsim
