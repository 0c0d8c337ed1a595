#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "spillscope/spillscope.hpp"

namespace spillscope::cli {

namespace {

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err, true);
  auto logger = std::make_shared<spdlog::logger>("spillscope", sink);
  logger->set_pattern("spillscope: %l: %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv(kLogEnv); env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);
  }
  logger->set_level(level);
  return logger;
}

// Writes to --out when given, stdout otherwise.
bool write_output(const std::string& text, const std::string& out_path, std::ostream& out,
                  spdlog::logger& log) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    out.flush();
    return true;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) {
    log.error("cannot write '{}'", out_path);
    return false;
  }
  return true;
}

ParserConfig build_parser_config(const std::string& special_regs,
                                 const std::vector<std::string>& aliases, bool loose) {
  ParserConfig config;
  if (!special_regs.empty()) config.special_regs = SpecialRegisterSet::parse(special_regs);
  for (const auto& a : aliases) config.names.add_alias_spec(a);
  config.loose_functions = loose;
  return config;
}

void log_diagnostics(const AssemblyUnit& unit, spdlog::logger& log) {
  for (const auto& d : unit.diagnostics) {
    const auto level = d.severity == Severity::Error ? spdlog::level::err : spdlog::level::warn;
    log.log(level, "{}:{}: {}: {}", unit.source_path, d.line, to_string(d.code), d.message);
  }
}

struct AnalyzeArgs {
  std::string file;
  std::string special_regs;
  std::vector<std::string> aliases;
  std::string metric = "peak";
  std::string format = "md";
  bool per_function = false;
  bool loose_functions = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, spdlog::logger& log) {
  const ParserConfig config = build_parser_config(a.special_regs, a.aliases, a.loose_functions);
  const AddRegMetric metric = parse_metric(a.metric);
  const Format format = parse_format(a.format);

  const AssemblyUnit unit = parse_file(a.file, config);
  log_diagnostics(unit, log);
  const ProgramStats program = analyze_program(unit, metric, config.special_regs);
  for (const auto& f : program.per_function) {
    for (const auto& anomaly : f.anomalies) {
      log.info("{}:{}: {} in {}", unit.source_path, anomaly.line, to_string(anomaly.kind),
               f.function_name);
    }
  }
  const std::string canonical = config.canonical() + ";metric=" + a.metric;
  const std::string text =
      emit_program_report(program, format, a.per_function, make_provenance(canonical));
  out << text;
  out.flush();
  return kExitOk;
}

struct BatchArgs {
  std::string manifest;
  std::string out_path;
  unsigned jobs = 1;
};

int cmd_batch(const BatchArgs& a, std::ostream& out, spdlog::logger& log) {
  const CorpusManifest manifest = load_manifest(a.manifest);
  for (const auto& w : manifest.warnings) log.warn("{}", w);

  BatchResult result;
  try {
    result = run_batch(manifest, BatchOptions{a.jobs});
  } catch (const AllFailed& e) {
    result = e.result();
    log.error("{}", e.what());
  }
  for (const auto& f : result.failures) log.warn("application '{}' failed: {}", f.application, f.error);

  const std::string text = serialize_batch_result(result, make_provenance(manifest.canonical()));
  if (!write_output(text, a.out_path, out, log)) return kExitUsage;
  return result.failures.empty() ? kExitOk : kExitPartialFailure;
}

struct ReportArgs {
  std::string fixtures;
  std::string input;
  std::string tables;
  bool chart = false;
  std::string format = "md";
  std::string out_path;
};

ReportRequest parse_table_selection(const std::string& tables, bool chart) {
  ReportRequest request;
  request.chart = chart;
  if (tables.empty()) {
    // Without --tables, --chart alone selects only the chart.
    const bool all = !chart;
    request.spill_rates = request.addreg_averages = request.rounded = all;
    return request;
  }
  request.spill_rates = request.addreg_averages = request.rounded = false;
  std::size_t pos = 0;
  while (pos <= tables.size()) {
    auto comma = tables.find(',', pos);
    if (comma == std::string::npos) comma = tables.size();
    std::string item = tables.substr(pos, comma - pos);
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    std::transform(item.begin(), item.end(), item.begin(), ::toupper);
    if (item == "I" || item == "1") {
      request.spill_rates = true;
    } else if (item == "II" || item == "2") {
      request.addreg_averages = true;
    } else if (item == "III" || item == "3") {
      request.rounded = true;
    } else {
      throw ConfigError("unknown table '" + tables.substr(pos, comma - pos) +
                        "' (expected I, II or III)");
    }
    pos = comma + 1;
  }
  return request;
}

int cmd_report(const ReportArgs& a, std::ostream& out, spdlog::logger& log) {
  const ReportRequest request = parse_table_selection(a.tables, a.chart);
  const Format format = parse_format(a.format);

  std::vector<ApplicationRecord> records;
  std::string source;
  if (!a.fixtures.empty()) {
    records = load_fixture(a.fixtures);
    source = "fixtures:" + std::filesystem::path(a.fixtures).filename().string();
  } else {
    std::ifstream in(a.input, std::ios::binary);
    if (!in) throw IoError("cannot read '" + a.input + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    records = records_from_batch_document(text);
    source = "input:" + std::filesystem::path(a.input).filename().string();
  }

  const CorpusSummary summary = summarize(records);
  log.info("{} applications in {} domains; reference line {}", records.size(),
           summary.domains.size(), format_half_up(summary.reference_line, 6));

  const std::string canonical = "report;" + source + ";tables=" + a.tables +
                                ";chart=" + (a.chart ? "1" : "0") + ";format=" +
                                std::string(to_string(format));
  const std::string text = emit_report(summary, records, request, format,
                                       make_provenance(canonical));
  return write_output(text, a.out_path, out, log) ? kExitOk : kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto logger = make_logger(err);

  CLI::App app{"Static register-spill analysis for ARM THUMB assembly listings", "spillscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one assembly file");
  analyze_cmd->add_option("file", analyze.file, "Assembly listing")->required();
  analyze_cmd->add_option("--special-regs", analyze.special_regs,
                          "Special register list (default r8-r12)");
  analyze_cmd->add_option("--alias", analyze.aliases, "Extra register alias, e.g. s1=sl");
  analyze_cmd->add_option("--metric", analyze.metric, "Per-function requirement: peak or end")
      ->check(CLI::IsMember({"peak", "end"}));
  analyze_cmd->add_option("--format", analyze.format, "md, csv or json");
  analyze_cmd->add_flag("--per-function", analyze.per_function, "Print per-function rows");
  analyze_cmd->add_flag("--loose-functions", analyze.loose_functions,
                        "Also start functions at plain top-level labels");

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Analyze every application of a manifest");
  batch_cmd->add_option("manifest", batch.manifest, "Corpus manifest (JSON)")->required();
  batch_cmd->add_option("--out", batch.out_path, "Result document path (default stdout)");
  batch_cmd->add_option("--jobs", batch.jobs, "Parallel applications")
      ->check(CLI::Range(1u, 1024u));

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Emit domain tables and chart data");
  auto* fixtures_opt =
      report_cmd->add_option("--fixtures", report.fixtures, "Fixture table (CSV)");
  auto* input_opt = report_cmd->add_option("--input", report.input, "Batch result document");
  fixtures_opt->excludes(input_opt);
  report_cmd->add_option("--tables", report.tables, "Comma-separated subset of I,II,III");
  report_cmd->add_flag("--chart", report.chart, "Emit chart data");
  report_cmd->add_option("--format", report.format, "md, csv or json");
  report_cmd->add_option("--out", report.out_path, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (report_cmd->parsed() && report.fixtures.empty() && report.input.empty()) {
      throw CLI::RequiredError("--fixtures or --input");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "spillscope: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(analyze, out, *logger);
    if (batch_cmd->parsed()) return cmd_batch(batch, out, *logger);
    return cmd_report(report, out, *logger);
  } catch (const Error& e) {
    logger->error("{}", e.what());
    return kExitUsage;
  }
}

}  // namespace spillscope::cli
