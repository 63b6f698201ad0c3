#include "emotikon/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace emotikon {

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  return std::nullopt;
}

std::string_view file_extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Json: return "json";
    case ReportFormat::Markdown: return "md";
  }
  return "txt";
}

namespace {

constexpr std::string_view kKeyHeader = "metric,method,d,k,ms,eps";

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\r\"") != std::string::npos)
    throw DataError("value '" + s + "' cannot be written to a CSV report");
}

std::string emit_csv(const ResultTable& t) {
  check_field(t.metric);
  std::string out(kKeyHeader);
  for (const auto& c : t.columns) {
    check_field(c);
    out += ',' + c + ',' + c + "_std," + c + "_n";
  }
  out += '\n';
  for (const auto& row : t.rows) {
    check_field(row.method);
    out += t.metric + ',' + row.method + ',' + std::to_string(row.dim) + ',';
    if (row.k) out += std::to_string(*row.k);
    out += ',';
    if (row.min_samples) out += std::to_string(*row.min_samples);
    out += ',';
    if (row.eps) out += format_double(*row.eps);
    for (const auto& cell : row.cells) {
      out += ',';
      if (cell.mean) out += format_double(*cell.mean);
      out += ',' + format_double(cell.stddev) + ',' + std::to_string(cell.samples);
    }
    out += '\n';
  }
  return out;
}

std::string emit_json(const ResultTable& t) {
  nlohmann::ordered_json doc;
  doc["metric"] = t.metric;
  doc["columns"] = t.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    r["method"] = row.method;
    r["d"] = row.dim;
    r["k"] = row.k ? nlohmann::ordered_json(*row.k) : nlohmann::ordered_json(nullptr);
    r["ms"] = row.min_samples ? nlohmann::ordered_json(*row.min_samples) : nlohmann::ordered_json(nullptr);
    r["eps"] = row.eps ? nlohmann::ordered_json(*row.eps) : nlohmann::ordered_json(nullptr);
    r["cells"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      const auto& cell = row.cells[i];
      nlohmann::ordered_json c;
      c["column"] = t.columns[i];
      c["mean"] = cell.mean ? nlohmann::ordered_json(*cell.mean) : nlohmann::ordered_json(nullptr);
      c["std"] = cell.stddev;
      c["n"] = cell.samples;
      r["cells"].push_back(std::move(c));
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string column_title(const ResultTable& t, const std::string& column) {
  const std::string fn = t.metric == "purity" ? "Pur" : "Acc";
  if (column == ResultTable::kBaselineColumn) return fn + "(D)";
  if (column.rfind("tau=", 0) == 0) return fn + "(D') τ=" + column.substr(4);
  return column;
}

std::string emit_markdown(const ResultTable& t) {
  const bool any_k = std::any_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r.k.has_value(); });
  const bool any_ms =
      std::any_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r.min_samples.has_value(); });
  const bool any_eps = std::any_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r.eps.has_value(); });

  std::string out = "| Method | d |";
  std::string rule = "|---|---:|";
  if (any_k) out += " k |", rule += "---:|";
  if (any_ms) out += " ms |", rule += "---:|";
  if (any_eps) out += " eps |", rule += "---:|";
  for (const auto& c : t.columns) {
    out += ' ' + column_title(t, c) + " |";
    rule += "---:|";
  }
  out += '\n' + rule + '\n';
  for (const auto& row : t.rows) {
    double best = -1.0;
    for (const auto& cell : row.cells)
      if (cell.mean) best = std::max(best, *cell.mean);
    out += "| " + row.method + " | " + std::to_string(row.dim) + " |";
    if (any_k) out += ' ' + (row.k ? std::to_string(*row.k) : std::string()) + " |";
    if (any_ms) out += ' ' + (row.min_samples ? std::to_string(*row.min_samples) : std::string()) + " |";
    if (any_eps) out += ' ' + (row.eps ? format_double(*row.eps) : std::string()) + " |";
    for (const auto& cell : row.cells) {
      if (!cell.mean) {
        out += " - |";
      } else if (*cell.mean == best) {
        out += " **" + fixed3(*cell.mean) + "** |";
      } else {
        out += ' ' + fixed3(*cell.mean) + " |";
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line_no, "invalid number '" + std::string(s) + "'");
  return value;
}

}  // namespace

std::string emit_report(const ResultTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return emit_csv(table);
    case ReportFormat::Json: return emit_json(table);
    case ReportFormat::Markdown: return emit_markdown(table);
  }
  throw std::invalid_argument("unknown report format");
}

std::string emit_report(const ResultTable& table, std::string_view format) {
  const auto f = parse_report_format(format);
  if (!f) throw std::invalid_argument("unknown report format '" + std::string(format) + "'");
  return emit_report(table, *f);
}

ResultTable parse_csv_report(std::string_view csv) {
  ResultTable t;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start < csv.size()) {
    auto newline = csv.find('\n', start);
    if (newline == std::string_view::npos) newline = csv.size();
    const auto line = csv.substr(start, newline - start);
    start = newline + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 6 || line.substr(0, kKeyHeader.size()) != kKeyHeader || (fields.size() - 6) % 3 != 0)
        throw ParseError(line_no, "unrecognized report header");
      for (std::size_t i = 6; i < fields.size(); i += 3) {
        const std::string col(fields[i]);
        if (fields[i + 1] != col + "_std" || fields[i + 2] != col + "_n")
          throw ParseError(line_no, "malformed column group for '" + col + "'");
        t.columns.push_back(col);
      }
      continue;
    }
    if (fields.size() != 6 + 3 * t.columns.size()) throw ParseError(line_no, "wrong field count");
    if (t.rows.empty()) {
      t.metric = std::string(fields[0]);
    } else if (fields[0] != t.metric) {
      throw ParseError(line_no, "mixed metrics in one report");
    }
    ResultRow row;
    row.method = std::string(fields[1]);
    row.dim = parse_number<std::size_t>(fields[2], line_no);
    if (!fields[3].empty()) row.k = parse_number<std::size_t>(fields[3], line_no);
    if (!fields[4].empty()) row.min_samples = parse_number<std::size_t>(fields[4], line_no);
    if (!fields[5].empty()) row.eps = parse_number<double>(fields[5], line_no);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      ResultCell cell;
      const auto mean = fields[6 + 3 * c];
      if (!mean.empty()) cell.mean = parse_number<double>(mean, line_no);
      cell.stddev = parse_number<double>(fields[7 + 3 * c], line_no);
      cell.samples = parse_number<std::size_t>(fields[8 + 3 * c], line_no);
      row.cells.push_back(cell);
    }
    t.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(1, "empty report");
  return t;
}

}  // namespace emotikon
