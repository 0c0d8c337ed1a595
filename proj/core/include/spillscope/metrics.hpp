#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spillscope {

// Exact quotient, kept unreduced.
struct Ratio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// (spills + overheads) / total_instructions.
// Throws ZeroInstructions when total_instructions is 0 and
// std::invalid_argument on negative inputs.
Ratio spilling_rate(std::int64_t spills, std::int64_t overheads, std::int64_t total_instructions);

struct ApplicationRecord {
  std::string name;
  std::string domain;
  double spilling_rate = 0.0;
  long additional_registers = 0;
  bool exclude_addreg = false;  // outlier: left out of the filtered average

  friend bool operator==(const ApplicationRecord&, const ApplicationRecord&) = default;
};

struct DomainSummary {
  std::string domain;
  double avg_spilling_rate = 0.0;
  double avg_additional_registers_raw = 0.0;
  double avg_additional_registers_filtered = 0.0;
  long rounded_registers = 0;
  int n_applications = 0;
  int n_excluded = 0;

  friend bool operator==(const DomainSummary&, const DomainSummary&) = default;
};

struct CorpusSummary {
  std::vector<DomainSummary> domains;
  double reference_line = 0.0;

  const DomainSummary* find(std::string_view domain) const;

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

// Averages accumulate left to right in record order. Throws EmptyDomain.
double domain_spill_average(std::span<const ApplicationRecord> records, std::string_view domain);

// Throws EmptyDomain, or AllExcluded when exclusions remove every record.
double domain_addreg_average(std::span<const ApplicationRecord> records, std::string_view domain,
                             bool apply_exclusions);

// Smallest integer >= avg. Throws std::invalid_argument for negative input.
long round_up_registers(double avg);

// Mean spilling rate over every application (not the mean of domain means).
// Throws EmptyCorpus.
double reference_line(std::span<const ApplicationRecord> records);

// One summary per domain, in order of first appearance.
CorpusSummary summarize(std::span<const ApplicationRecord> records);

// The unweighted mean of the domain averages. Reported only for comparison
// with reference_line().
double mean_of_domain_means(const CorpusSummary& summary);

}  // namespace spillscope
