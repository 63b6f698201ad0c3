#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "emotikon/evaluate.hpp"

namespace emotikon {

enum class ReportFormat { Csv, Json, Markdown };

// "csv", "json" or "markdown"/"md"; nullopt otherwise.
std::optional<ReportFormat> parse_report_format(std::string_view name);
std::string_view file_extension(ReportFormat format);

// Deterministic serialization of a result table.
//
// CSV: header "metric,method,d,k,ms,eps" followed by "<col>,<col>_std,<col>_n"
// for each column; absent values are empty fields. Numbers use the shortest
// round-trip decimal form, so parse_csv_report followed by emit_report is
// byte-identical.
//
// Markdown: one row per table row, values to three decimals, and every cell
// equal to the row maximum in bold.
std::string emit_report(const ResultTable& table, ReportFormat format);

// Throws std::invalid_argument for an unknown format name.
std::string emit_report(const ResultTable& table, std::string_view format);

// The metric is read from the rows, so a report without rows parses with an
// empty metric. Throws ParseError on malformed input.
ResultTable parse_csv_report(std::string_view csv);

}  // namespace emotikon
