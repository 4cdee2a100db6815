#include "dcsim/ledger.h"

namespace dcsim {

std::string_view to_string(ledger_event e)
{
    switch (e) {
    case ledger_event::lookup: return "lookup";
    case ledger_event::install: return "install";
    case ledger_event::promote: return "promote";
    case ledger_event::demote: return "demote";
    case ledger_event::mem_read: return "mem_read";
    case ledger_event::mem_write: return "mem_write";
    case ledger_event::extra_way_lookup: return "extra_way_lookup";
    }
    return "?";
}

replacement_ratios replacement_bandwidth_normalized(const bandwidth_ledger& ledger,
                                                    const bandwidth_ledger& baseline)
{
    if (baseline.installs() == 0)
        throw std::domain_error("baseline ledger has zero installs; cannot normalize");
    const double base = static_cast<double>(baseline.installs());
    replacement_ratios r;
    r.install_ratio = static_cast<double>(ledger.installs()) / base;
    r.promote_ratio = static_cast<double>(ledger.promotes()) / base;
    r.demote_ratio = static_cast<double>(ledger.demotes()) / base;
    r.total_ratio = r.install_ratio + r.promote_ratio + r.demote_ratio;
    return r;
}

} // namespace dcsim
