#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsim/ledger.h"

namespace dcsim {

inline constexpr std::string_view report_schema = "dcsim-report/1";
inline constexpr std::string_view csv_header = "label,metric,value";

enum class report_format { jsonl, csv, table };

report_format parse_report_format(std::string_view name);

/// One compact JSON object per line.
std::string emit_jsonl(std::span<const nlohmann::ordered_json> reports);

/// `label,metric,value` rows; nested keys are joined with '.', array
/// elements by index.
std::string emit_csv(std::span<const nlohmann::ordered_json> reports);

/// Fixed-width comparison table, one row per report.
std::string emit_table(std::span<const nlohmann::ordered_json> reports);

std::string emit(report_format format, std::span<const nlohmann::ordered_json> reports);

/// Parses JSON-lines back into reports. Throws std::runtime_error with the
/// line number on bad input.
std::vector<nlohmann::ordered_json> parse_jsonl(std::string_view text, std::string_view source = "<reports>");

bandwidth_ledger ledger_from_report(const nlohmann::ordered_json& report);

/// Index of the report whose label, or failing that policy, equals `name`.
/// Throws config_error if none matches.
std::size_t find_baseline(std::span<const nlohmann::ordered_json> reports, std::string_view name);

} // namespace dcsim
