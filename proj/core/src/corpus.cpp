#include "spillscope/corpus.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "text.hpp"

namespace spillscope {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw SchemaError(path + "." + key, "expected a non-empty string");
  }
  return v.get<std::string>();
}

bool optional_bool(const json& obj, const char* key, const std::string& path, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw SchemaError(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

void check_known_keys(const json& obj, std::initializer_list<std::string_view> known,
                      const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) throw SchemaError(path + "." + key, "unknown field");
  }
}

ParserConfig parse_parser_config(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  check_known_keys(obj, {"special_regs", "aliases", "loose_functions"}, path);
  ParserConfig config;
  try {
    if (auto it = obj.find("special_regs"); it != obj.end()) {
      if (!it->is_string()) throw SchemaError(path + ".special_regs", "expected a string");
      config.special_regs = SpecialRegisterSet::parse(it->get<std::string>());
    }
    if (auto it = obj.find("aliases"); it != obj.end()) {
      if (!it->is_object()) throw SchemaError(path + ".aliases", "expected an object");
      for (const auto& [alias, target] : it->items()) {
        if (!target.is_string()) {
          throw SchemaError(path + ".aliases." + alias, "expected a register name");
        }
        config.names.add_alias(alias, target.get<std::string>());
      }
    }
  } catch (const ConfigError& e) {
    throw SchemaError(path, e.what());
  }
  config.loose_functions = optional_bool(obj, "loose_functions", path, false);
  return config;
}

}  // namespace

std::string CorpusManifest::canonical() const {
  std::string out = parser.canonical();
  out += ";metric=";
  out += to_string(metric);
  for (const auto& app : applications) {
    out += ";app=" + app.name + "@" + app.domain + (app.exclude_addreg ? "!" : "");
    for (const auto& f : app.files) out += "," + f.filename().string();
  }
  return out;
}

CorpusManifest parse_manifest(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "manifest must be an object");
  check_known_keys(doc, {"applications", "parser", "metric"}, "$");

  CorpusManifest manifest;
  if (auto it = doc.find("parser"); it != doc.end()) {
    manifest.parser = parse_parser_config(*it, "$.parser");
  }
  if (auto it = doc.find("metric"); it != doc.end()) {
    if (!it->is_string()) throw SchemaError("$.metric", "expected \"peak\" or \"end\"");
    try {
      manifest.metric = parse_metric(it->get<std::string>());
    } catch (const ConfigError& e) {
      throw SchemaError("$.metric", e.what());
    }
  }

  const json& apps = require(doc, "applications", "$");
  if (!apps.is_array() || apps.empty()) {
    throw SchemaError("$.applications", "expected a non-empty array");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const std::string path = "$.applications[" + std::to_string(i) + "]";
    const json& a = apps[i];
    if (!a.is_object()) throw SchemaError(path, "expected an object");
    check_known_keys(a, {"name", "domain", "files", "exclude_addreg"}, path);

    ManifestApplication app;
    app.name = require_string(a, "name", path);
    app.domain = require_string(a, "domain", path);
    app.exclude_addreg = optional_bool(a, "exclude_addreg", path, false);
    if (!seen.insert(app.name).second) throw DuplicateApplication(path + ".name", app.name);

    const json& files = require(a, "files", path);
    if (!files.is_array() || files.empty()) {
      throw SchemaError(path + ".files", "expected a non-empty array of paths");
    }
    for (std::size_t j = 0; j < files.size(); ++j) {
      if (!files[j].is_string() || files[j].get<std::string>().empty()) {
        throw SchemaError(path + ".files[" + std::to_string(j) + "]", "expected a path");
      }
      fs::path file = files[j].get<std::string>();
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      std::error_code ec;
      if (!fs::exists(file, ec)) {
        manifest.warnings.push_back(path + ".files[" + std::to_string(j) + "]: missing file '" +
                                    file.string() + "'");
      }
      app.files.push_back(std::move(file));
    }
    manifest.applications.push_back(std::move(app));
  }
  return manifest;
}

CorpusManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_text(path), path.parent_path());
}

ProgramStats analyze_application(const ManifestApplication& app, const ParserConfig& parser,
                                 AddRegMetric metric) {
  std::vector<FunctionStats> functions;
  for (const fs::path& file : app.files) {
    const AssemblyUnit unit = parse_file(file, parser);
    ProgramStats program = analyze_program(unit, metric, parser.special_regs);
    for (auto& f : program.per_function) functions.push_back(std::move(f));
  }
  return aggregate_functions(app.name, std::move(functions), metric);
}

BatchResult run_batch(const CorpusManifest& manifest, const BatchOptions& options) {
  struct Outcome {
    std::optional<ProgramStats> program;
    std::optional<ApplicationRecord> record;
    std::string error;
  };
  const std::size_t n = manifest.applications.size();
  std::vector<Outcome> outcomes(n);

  auto work = [&](std::size_t i) {
    const ManifestApplication& app = manifest.applications[i];
    try {
      ProgramStats program = analyze_application(app, manifest.parser, manifest.metric);
      const Ratio rate =
          spilling_rate(program.spill_count, program.overhead_count, program.instruction_count);
      outcomes[i].record = ApplicationRecord{app.name, app.domain, rate.value(),
                                             program.additional_registers, app.exclude_addreg};
      outcomes[i].program = std::move(program);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(options.jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    }
  }

  BatchResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes[i].record) {
      result.records.push_back(std::move(*outcomes[i].record));
      result.per_application.push_back(std::move(*outcomes[i].program));
    } else {
      result.failures.push_back({manifest.applications[i].name, outcomes[i].error});
    }
  }
  if (n > 0 && result.records.empty()) throw AllFailed(std::move(result));
  return result;
}

std::vector<ApplicationRecord> parse_fixture(std::string_view csv) {
  std::vector<ApplicationRecord> records;
  std::set<std::string> seen;
  bool header_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = detail::trim(csv.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::string where = "line " + std::to_string(line_no);
    if (!header_seen) {
      if (line != kFixtureHeader) {
        throw SchemaError(where, "expected header '" + std::string(kFixtureHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    const auto cells = detail::split_top_level(line, ',');
    if (cells.size() != 5) {
      throw SchemaError(where, "expected 5 columns, found " + std::to_string(cells.size()));
    }
    ApplicationRecord r;
    r.name = std::string(cells[0]);
    r.domain = std::string(cells[1]);
    if (r.name.empty()) throw SchemaError(where + ".application", "empty application name");
    if (r.domain.empty()) throw SchemaError(where + ".domain", "empty domain");

    const auto rate = cells[2];
    auto [p1, e1] = std::from_chars(rate.data(), rate.data() + rate.size(), r.spilling_rate);
    if (e1 != std::errc{} || p1 != rate.data() + rate.size() || !(r.spilling_rate >= 0.0) ||
        !std::isfinite(r.spilling_rate)) {
      throw SchemaError(where + ".spilling_rate",
                        "expected a non-negative number, got '" + std::string(rate) +
                            "'");
    }
    const auto regs = cells[3];
    auto [p2, e2] = std::from_chars(regs.data(), regs.data() + regs.size(), r.additional_registers);
    if (e2 != std::errc{} || p2 != regs.data() + regs.size() || r.additional_registers < 0) {
      throw SchemaError(where + ".additional_registers",
                        "expected a non-negative integer, got '" + std::string(regs) + "'");
    }
    const std::string flag = detail::to_lower(cells[4]);
    if (flag == "true") {
      r.exclude_addreg = true;
    } else if (flag != "false") {
      throw SchemaError(where + ".exclude_addreg", "expected true or false");
    }
    if (!seen.insert(r.name).second) throw DuplicateApplication(where, r.name);
    records.push_back(std::move(r));
  }
  if (!header_seen) throw SchemaError("line 1", "empty fixture");
  if (records.empty()) throw SchemaError("", "fixture has no rows");
  return records;
}

std::vector<ApplicationRecord> load_fixture(const fs::path& path) {
  return parse_fixture(read_text(path));
}

namespace {

json to_json(const FunctionStats& f) {
  json anomalies = json::array();
  for (const auto& a : f.anomalies) {
    anomalies.push_back({{"kind", to_string(a.kind)}, {"line", a.line}});
  }
  return {{"function", f.function_name},
          {"spill_count", f.spill_count},
          {"overhead_count", f.overhead_count},
          {"add_reg_peak", f.add_reg_peak},
          {"add_reg_end", f.add_reg_end},
          {"instruction_count", f.instruction_count},
          {"anomalies", std::move(anomalies)}};
}

json to_json(const ProgramStats& p) {
  json functions = json::array();
  for (const auto& f : p.per_function) functions.push_back(to_json(f));
  return {{"program", p.program_name},
          {"spill_count", p.spill_count},
          {"overhead_count", p.overhead_count},
          {"instruction_count", p.instruction_count},
          {"additional_registers", p.additional_registers},
          {"metric", to_string(p.metric)},
          {"functions", std::move(functions)}};
}

}  // namespace

std::string serialize_batch_result(const BatchResult& result, const Provenance& provenance) {
  json records = json::array();
  for (const auto& r : result.records) {
    records.push_back({{"name", r.name},
                       {"domain", r.domain},
                       {"spilling_rate", r.spilling_rate},
                       {"additional_registers", r.additional_registers},
                       {"exclude_addreg", r.exclude_addreg}});
  }
  json programs = json::array();
  for (const auto& p : result.per_application) programs.push_back(to_json(p));
  json failures = json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"application", f.application}, {"error", f.error}});
  }
  json doc = {{"records", std::move(records)},
              {"programs", std::move(programs)},
              {"failures", std::move(failures)},
              {"provenance",
               {{"tool_version", provenance.tool_version},
                {"config_digest", provenance.config_digest},
                {"timestamp", provenance.timestamp}}}};
  return doc.dump(2) + "\n";
}

std::vector<ApplicationRecord> records_from_batch_document(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  const json& records = require(doc, "records", "$");
  if (!records.is_array()) throw SchemaError("$.records", "expected an array");

  std::vector<ApplicationRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "$.records[" + std::to_string(i) + "]";
    const json& r = records[i];
    if (!r.is_object()) throw SchemaError(path, "expected an object");
    ApplicationRecord rec;
    rec.name = require_string(r, "name", path);
    rec.domain = require_string(r, "domain", path);
    const json& rate = require(r, "spilling_rate", path);
    if (!rate.is_number() || rate.get<double>() < 0.0) {
      throw SchemaError(path + ".spilling_rate", "expected a non-negative number");
    }
    rec.spilling_rate = rate.get<double>();
    const json& regs = require(r, "additional_registers", path);
    if (!regs.is_number_integer() || regs.get<long>() < 0) {
      throw SchemaError(path + ".additional_registers", "expected a non-negative integer");
    }
    rec.additional_registers = regs.get<long>();
    rec.exclude_addreg = optional_bool(r, "exclude_addreg", path, false);
    if (!seen.insert(rec.name).second) throw DuplicateApplication(path + ".name", rec.name);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace spillscope
