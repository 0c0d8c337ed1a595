#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spillscope/engine.hpp"
#include "spillscope/metrics.hpp"
#include "spillscope/provenance.hpp"

namespace spillscope {

enum class Format { Markdown, Csv, Json };

// Accepts md/markdown, csv, json. Throws UnsupportedFormat.
Format parse_format(std::string_view name);
std::string_view to_string(Format format);

// Row model shared by all renderers. Every cell is already formatted under
// the display precision policy.
struct Table {
  std::string key;    // stable identifier used as the JSON key
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

std::string render_table(const Table& table, Format format);

// Per-application spilling rates with domain averages (average cell on the
// first row of each domain group).
Table spill_rate_table(const CorpusSummary& summary, std::span<const ApplicationRecord> records);

// Per-application additional registers with raw domain averages; excluded
// applications are marked.
Table addreg_average_table(const CorpusSummary& summary,
                           std::span<const ApplicationRecord> records);

// Raw average, outlier-filtered average and rounded register count per domain.
Table rounded_table(const CorpusSummary& summary, std::span<const ApplicationRecord> records);

// One bar per domain plus a trailing reference-line row.
Table chart_table(const CorpusSummary& summary);

std::string emit_spill_rate_table(const CorpusSummary& summary,
                                  std::span<const ApplicationRecord> records, Format format);

// Both the raw-average table and the rounded table.
std::string emit_addreg_tables(const CorpusSummary& summary,
                               std::span<const ApplicationRecord> records, Format format);

std::string emit_chart_data(const CorpusSummary& summary, Format format);

struct ReportRequest {
  bool spill_rates = true;      // table I
  bool addreg_averages = true;  // table II
  bool rounded = true;          // table III
  bool chart = false;
};

// Full report document: the requested tables and chart plus provenance.
// JSON output is one object {"tables": {...}, "chart": {...}, "provenance": {...}}.
std::string emit_report(const CorpusSummary& summary, std::span<const ApplicationRecord> records,
                        const ReportRequest& request, Format format,
                        const Provenance& provenance);

// Output of `spillscope analyze`: optional per-function rows, then the
// program totals, additional registers and spilling rate.
std::string emit_program_report(const ProgramStats& program, Format format, bool per_function,
                                const Provenance& provenance);

}  // namespace spillscope
