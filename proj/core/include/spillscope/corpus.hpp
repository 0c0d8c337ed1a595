#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spillscope/engine.hpp"
#include "spillscope/error.hpp"
#include "spillscope/metrics.hpp"
#include "spillscope/parser.hpp"
#include "spillscope/provenance.hpp"

namespace spillscope {

struct ManifestApplication {
  std::string name;
  std::string domain;
  std::vector<std::filesystem::path> files;  // resolved against the manifest directory
  bool exclude_addreg = false;

  friend bool operator==(const ManifestApplication&, const ManifestApplication&) = default;
};

// A batch description. JSON layout:
//
//   {
//     "applications": [
//       {"name": "qsort", "domain": "automotive", "files": ["qsort.s"],
//        "exclude_addreg": false}
//     ],
//     "parser": {"special_regs": "r8-r12", "aliases": {"s1": "sl"},
//                "loose_functions": false},
//     "metric": "peak"
//   }
//
// Only "applications" is required.
struct CorpusManifest {
  std::vector<ManifestApplication> applications;
  ParserConfig parser;
  AddRegMetric metric = AddRegMetric::Peak;
  std::vector<std::string> warnings;  // e.g. files missing at load time

  std::string canonical() const;
};

// Throws SchemaError (with the JSON field path) and DuplicateApplication.
CorpusManifest parse_manifest(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});

// Throws IoError in addition to the parse_manifest errors.
CorpusManifest load_manifest(const std::filesystem::path& path);

struct ApplicationFailure {
  std::string application;
  std::string error;

  friend bool operator==(const ApplicationFailure&, const ApplicationFailure&) = default;
};

struct BatchResult {
  std::vector<ApplicationRecord> records;
  std::vector<ProgramStats> per_application;  // parallel to `records`
  std::vector<ApplicationFailure> failures;

  friend bool operator==(const BatchResult&, const BatchResult&) = default;
};

// Thrown by run_batch when no application could be analyzed.
class AllFailed : public Error {
 public:
  explicit AllFailed(BatchResult result)
      : Error("every application in the batch failed"), result_(std::move(result)) {}
  const BatchResult& result() const noexcept { return result_; }

 private:
  BatchResult result_;
};

struct BatchOptions {
  unsigned jobs = 1;
};

// Analyzes one application: counters summed over all files, additional
// registers = max over every function of every file.
ProgramStats analyze_application(const ManifestApplication& app, const ParserConfig& parser,
                                 AddRegMetric metric);

// Output order follows the manifest regardless of `jobs`. A failing file
// fails only its own application.
BatchResult run_batch(const CorpusManifest& manifest, const BatchOptions& options = {});

inline constexpr std::string_view kFixtureHeader =
    "application,domain,spilling_rate,additional_registers,exclude_addreg";

// Throws SchemaError / DuplicateApplication.
std::vector<ApplicationRecord> parse_fixture(std::string_view csv);
std::vector<ApplicationRecord> load_fixture(const std::filesystem::path& path);

std::string serialize_batch_result(const BatchResult& result, const Provenance& provenance);

// Reads the "records" array of a serialized batch result. Throws SchemaError.
std::vector<ApplicationRecord> records_from_batch_document(std::string_view json_text);

}  // namespace spillscope
