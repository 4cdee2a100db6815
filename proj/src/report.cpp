#include "dcsim/report.h"

#include <stdexcept>

#include <fmt/format.h>

#include "dcsim/geometry.h"

namespace dcsim {

using nlohmann::ordered_json;

report_format parse_report_format(std::string_view name)
{
    if (name == "jsonl")
        return report_format::jsonl;
    if (name == "csv")
        return report_format::csv;
    if (name == "table")
        return report_format::table;
    throw config_error("unknown output format '" + std::string(name) + "' (known: jsonl, csv, table)");
}

std::string emit_jsonl(std::span<const ordered_json> reports)
{
    std::string out;
    for (const auto& r : reports) {
        out += r.dump();
        out += '\n';
    }
    return out;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

void flatten(const ordered_json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows)
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "." + std::to_string(i), rows);
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

std::string display_label(const ordered_json& r)
{
    const std::string label = r.value("label", "");
    return label.empty() ? r.value("policy", "") : label;
}

} // namespace

std::string emit_csv(std::span<const ordered_json> reports)
{
    std::string out(csv_header);
    out += '\n';
    for (const auto& r : reports) {
        const std::string label = csv_field(display_label(r));
        std::vector<std::pair<std::string, std::string>> rows;
        for (const auto& [k, v] : r.items())
            if (k != "label")
                flatten(v, k, rows);
        for (const auto& [metric, value] : rows)
            out += label + "," + csv_field(metric) + "," + csv_field(value) + "\n";
    }
    return out;
}

std::string emit_table(std::span<const ordered_json> reports)
{
    bool normalized = false;
    std::size_t width = 5;
    for (const auto& r : reports) {
        normalized |= r.contains("normalized");
        width = std::max(width, display_label(r).size());
    }
    std::string out = fmt::format("{:<{}}  {:<12} {:>10} {:>10} {:>10} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
                                  "label", width, "policy", "accesses", "hits", "misses", "hit%", "installs",
                                  "promotes", "demotes", "mem_rd", "mem_wr");
    if (normalized)
        out += fmt::format(" {:>8} {:>8} {:>8} {:>8}", "inst/B", "prom/B", "dem/B", "repl/B");
    out += '\n';
    for (const auto& r : reports) {
        const auto& l = r.at("ledger");
        out += fmt::format("{:<{}}  {:<12} {:>10} {:>10} {:>10} {:>8.2f} {:>10} {:>10} {:>10} {:>10} {:>10}",
                           display_label(r), width, r.value("policy", ""), r.at("accesses").get<uint64_t>(),
                           r.at("hits").get<uint64_t>(), r.at("misses").get<uint64_t>(),
                           100.0 * r.at("hit_rate").get<double>(), l.at("install").get<uint64_t>(),
                           l.at("promote").get<uint64_t>(), l.at("demote").get<uint64_t>(),
                           l.at("mem_read").get<uint64_t>(), l.at("mem_write").get<uint64_t>());
        if (normalized) {
            if (r.contains("normalized")) {
                const auto& n = r.at("normalized");
                out += fmt::format(" {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f}", n.at("install_ratio").get<double>(),
                                   n.at("promote_ratio").get<double>(), n.at("demote_ratio").get<double>(),
                                   n.at("total_ratio").get<double>());
            } else {
                out += fmt::format(" {:>8} {:>8} {:>8} {:>8}", "-", "-", "-", "-");
            }
        }
        out += '\n';
    }
    return out;
}

std::string emit(report_format format, std::span<const ordered_json> reports)
{
    switch (format) {
    case report_format::jsonl: return emit_jsonl(reports);
    case report_format::csv: return emit_csv(reports);
    case report_format::table: return emit_table(reports);
    }
    return {};
}

std::vector<ordered_json> parse_jsonl(std::string_view text, std::string_view source)
{
    std::vector<ordered_json> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        try {
            out.push_back(ordered_json::parse(line));
        } catch (const ordered_json::exception& e) {
            throw std::runtime_error(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!out.back().is_object() || out.back().value("schema", "") != report_schema)
            throw std::runtime_error(std::string(source) + ":" + std::to_string(line_no) + ": not a "
                                     + std::string(report_schema) + " record");
    }
    return out;
}

bandwidth_ledger ledger_from_report(const ordered_json& report)
{
    bandwidth_ledger l;
    const auto& j = report.at("ledger");
    for (std::size_t i = 0; i < ledger_event_count; ++i) {
        const auto e = static_cast<ledger_event>(i);
        l.record(e, j.at(std::string(to_string(e))).get<uint64_t>());
    }
    return l;
}

std::size_t find_baseline(std::span<const ordered_json> reports, std::string_view name)
{
    for (std::size_t i = 0; i < reports.size(); ++i)
        if (reports[i].value("label", "") == name)
            return i;
    for (std::size_t i = 0; i < reports.size(); ++i)
        if (reports[i].value("policy", "") == name)
            return i;
    throw config_error("baseline '" + std::string(name) + "' not found among the reports");
}

} // namespace dcsim
