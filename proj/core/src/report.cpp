#include "spillscope/report.hpp"

#include <sstream>

#include <json.hpp>

#include "spillscope/display.hpp"
#include "spillscope/error.hpp"

namespace spillscope {

using nlohmann::json;

namespace {

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

json table_json(const Table& t) {
  return {{"title", t.title}, {"columns", t.columns}, {"rows", t.rows}};
}

json provenance_json(const Provenance& p) {
  return {{"tool_version", p.tool_version},
          {"config_digest", p.config_digest},
          {"timestamp", p.timestamp}};
}

json chart_json(const CorpusSummary& summary) {
  json bars = json::array();
  for (const auto& d : summary.domains) {
    bars.push_back({{"domain", d.domain},
                    {"avg_rate", format_half_up(d.avg_spilling_rate, precision::kRate)},
                    {"above_reference", d.avg_spilling_rate > summary.reference_line}});
  }
  return {{"bars", std::move(bars)},
          {"reference_line", format_half_up(summary.reference_line, precision::kReferenceLine)}};
}

std::string provenance_line(const Provenance& p, Format format) {
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "# spillscope " << p.tool_version << " config=" << p.config_digest
        << " timestamp=" << p.timestamp << "\n";
  } else {
    out << "_spillscope " << p.tool_version << ", config " << p.config_digest << ", "
        << p.timestamp << "_\n";
  }
  return out.str();
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

// A one-application domain echoes its value; nothing was averaged.
std::string raw_addreg_average(const DomainSummary& d) {
  if (d.n_applications == 1) return format_trimmed(d.avg_additional_registers_raw, 0);
  return format_half_up(d.avg_additional_registers_raw, precision::kAddRegAverage);
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "md" || name == "markdown") return Format::Markdown;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw UnsupportedFormat("unsupported format '" + std::string(name) + "' (md, csv, json)");
}

std::string_view to_string(Format format) {
  switch (format) {
    case Format::Markdown: return "md";
    case Format::Csv: return "csv";
    case Format::Json: return "json";
  }
  return "?";
}

std::string render_table(const Table& table, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Markdown: {
      out << "### " << table.title << "\n\n|";
      for (const auto& c : table.columns) out << ' ' << md_cell(c) << " |";
      out << "\n|";
      for (std::size_t i = 0; i < table.columns.size(); ++i) out << " --- |";
      out << '\n';
      for (const auto& row : table.rows) {
        out << '|';
        for (const auto& cell : row) out << ' ' << md_cell(cell) << " |";
        out << '\n';
      }
      break;
    }
    case Format::Csv: {
      std::vector<std::string> cells;
      for (const auto& c : table.columns) cells.push_back(csv_cell(c));
      out << join(cells, ",") << '\n';
      for (const auto& row : table.rows) {
        cells.clear();
        for (const auto& cell : row) cells.push_back(csv_cell(cell));
        out << join(cells, ",") << '\n';
      }
      break;
    }
    case Format::Json:
      out << table_json(table).dump(2) << '\n';
      break;
  }
  return out.str();
}

Table spill_rate_table(const CorpusSummary& summary, std::span<const ApplicationRecord> records) {
  Table t{"spill_rates", "Averages of spilling rates",
          {"Application Domain", "Application Name", "Spilling Rate", "Average"}, {}};
  for (const auto& d : summary.domains) {
    bool first = true;
    for (const auto& r : records) {
      if (r.domain != d.domain) continue;
      t.rows.push_back({d.domain, r.name, format_half_up(r.spilling_rate, precision::kRate),
                        first ? format_half_up(d.avg_spilling_rate, precision::kRate) : ""});
      first = false;
    }
  }
  return t;
}

Table addreg_average_table(const CorpusSummary& summary,
                           std::span<const ApplicationRecord> records) {
  Table t{"addreg_averages",
          "Averages of additional registers",
          {"Application Domain", "Application Name", "Additional Registers", "Average",
           "Excluded"},
          {}};
  for (const auto& d : summary.domains) {
    bool first = true;
    for (const auto& r : records) {
      if (r.domain != d.domain) continue;
      t.rows.push_back(
          {d.domain, r.name, std::to_string(r.additional_registers),
           first ? raw_addreg_average(d) : "",
           r.exclude_addreg ? "yes" : ""});
      first = false;
    }
  }
  return t;
}

Table rounded_table(const CorpusSummary& summary, std::span<const ApplicationRecord> records) {
  Table t{"rounded",
          "Rounded values of additional registers",
          {"Application Domain", "Raw Average", "Filtered Average", "Rounded Value",
           "Excluded Applications"},
          {}};
  for (const auto& d : summary.domains) {
    std::vector<std::string> excluded;
    for (const auto& r : records) {
      if (r.domain == d.domain && r.exclude_addreg) excluded.push_back(r.name);
    }
    t.rows.push_back(
        {d.domain, raw_addreg_average(d),
         format_trimmed(d.avg_additional_registers_filtered, precision::kFilteredAverage),
         std::to_string(d.rounded_registers), join(excluded, " ")});
  }
  return t;
}

Table chart_table(const CorpusSummary& summary) {
  Table t{"chart", "Spilling rate by domain",
          {"Application Domain", "Average Spilling Rate", "Above Reference"}, {}};
  for (const auto& d : summary.domains) {
    t.rows.push_back({d.domain, format_half_up(d.avg_spilling_rate, precision::kRate),
                      d.avg_spilling_rate > summary.reference_line ? "yes" : "no"});
  }
  t.rows.push_back(
      {"reference_line", format_half_up(summary.reference_line, precision::kReferenceLine), ""});
  return t;
}

std::string emit_spill_rate_table(const CorpusSummary& summary,
                                  std::span<const ApplicationRecord> records, Format format) {
  return render_table(spill_rate_table(summary, records), format);
}

std::string emit_addreg_tables(const CorpusSummary& summary,
                               std::span<const ApplicationRecord> records, Format format) {
  const Table averages = addreg_average_table(summary, records);
  const Table rounded = rounded_table(summary, records);
  if (format == Format::Json) {
    json doc = {{averages.key, table_json(averages)}, {rounded.key, table_json(rounded)}};
    return doc.dump(2) + "\n";
  }
  return render_table(averages, format) + "\n" + render_table(rounded, format);
}

std::string emit_chart_data(const CorpusSummary& summary, Format format) {
  if (summary.domains.empty()) throw EmptyCorpus("chart of an empty summary");
  if (format == Format::Json) return chart_json(summary).dump(2) + "\n";
  return render_table(chart_table(summary), format);
}

std::string emit_report(const CorpusSummary& summary, std::span<const ApplicationRecord> records,
                        const ReportRequest& request, Format format,
                        const Provenance& provenance) {
  std::vector<Table> tables;
  if (request.spill_rates) tables.push_back(spill_rate_table(summary, records));
  if (request.addreg_averages) tables.push_back(addreg_average_table(summary, records));
  if (request.rounded) tables.push_back(rounded_table(summary, records));

  if (format == Format::Json) {
    json doc;
    doc["tables"] = json::object();
    for (const auto& t : tables) doc["tables"][t.key] = table_json(t);
    if (request.chart) doc["chart"] = chart_json(summary);
    doc["provenance"] = provenance_json(provenance);
    return doc.dump(2) + "\n";
  }

  std::string out;
  if (format == Format::Csv) out += provenance_line(provenance, format);
  bool first = format != Format::Csv;
  for (const auto& t : tables) {
    if (!first) out += '\n';
    out += render_table(t, format);
    first = false;
  }
  if (request.chart) {
    if (!first) out += '\n';
    out += render_table(chart_table(summary), format);
  }
  if (format == Format::Markdown) out += "\n" + provenance_line(provenance, format);
  return out;
}

std::string emit_program_report(const ProgramStats& program, Format format, bool per_function,
                                const Provenance& provenance) {
  const Ratio rate =
      spilling_rate(program.spill_count, program.overhead_count, program.instruction_count);
  const std::string rate_text = format_half_up(rate.value(), precision::kRate);

  auto anomaly_summary = [](const FunctionStats& f) {
    std::vector<std::string> parts;
    for (const auto& a : f.anomalies) {
      parts.push_back(std::string(to_string(a.kind)) + "@" + std::to_string(a.line));
    }
    return join(parts, " ");
  };

  if (format == Format::Json) {
    json doc = {{"program", program.program_name},
                {"spill_count", program.spill_count},
                {"overhead_count", program.overhead_count},
                {"instruction_count", program.instruction_count},
                {"additional_registers", program.additional_registers},
                {"metric", to_string(program.metric)},
                {"spilling_rate", rate_text},
                {"spilling_rate_exact",
                 {{"numerator", rate.numerator}, {"denominator", rate.denominator}}}};
    if (per_function) {
      json functions = json::array();
      for (const auto& f : program.per_function) {
        json anomalies = json::array();
        for (const auto& a : f.anomalies) {
          anomalies.push_back({{"kind", to_string(a.kind)}, {"line", a.line}});
        }
        functions.push_back({{"function", f.function_name},
                             {"spill_count", f.spill_count},
                             {"overhead_count", f.overhead_count},
                             {"add_reg_peak", f.add_reg_peak},
                             {"add_reg_end", f.add_reg_end},
                             {"instruction_count", f.instruction_count},
                             {"anomalies", std::move(anomalies)}});
      }
      doc["functions"] = std::move(functions);
    }
    doc["provenance"] = provenance_json(provenance);
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == Format::Csv) {
    out << provenance_line(provenance, format);
    out << "scope,name,spills,overheads,add_reg_peak,add_reg_end,instructions,"
           "additional_registers,rate\n";
    if (per_function) {
      for (const auto& f : program.per_function) {
        out << "function," << csv_cell(f.function_name) << ',' << f.spill_count << ','
            << f.overhead_count << ',' << f.add_reg_peak << ',' << f.add_reg_end << ','
            << f.instruction_count << ",,\n";
      }
    }
    out << "program," << csv_cell(program.program_name) << ',' << program.spill_count << ','
        << program.overhead_count << ",,," << program.instruction_count << ','
        << program.additional_registers << ',' << rate_text << '\n';
    return out.str();
  }

  if (per_function) {
    Table t{"functions", "Per-function spill statistics",
            {"Function", "Spills", "Overheads", "AddReg Peak", "AddReg End", "Instructions",
             "Anomalies"},
            {}};
    for (const auto& f : program.per_function) {
      t.rows.push_back({f.function_name, std::to_string(f.spill_count),
                        std::to_string(f.overhead_count), std::to_string(f.add_reg_peak),
                        std::to_string(f.add_reg_end), std::to_string(f.instruction_count),
                        anomaly_summary(f)});
    }
    out << render_table(t, Format::Markdown) << '\n';
  }
  out << "program " << program.program_name << ": spills=" << program.spill_count
      << " overheads=" << program.overhead_count
      << " instructions=" << program.instruction_count
      << " addregs=" << program.additional_registers << " rate=" << rate_text
      << " metric=" << to_string(program.metric) << "\n\n"
      << provenance_line(provenance, format);
  return out.str();
}

}  // namespace spillscope
