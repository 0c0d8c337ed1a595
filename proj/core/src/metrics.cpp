#include "spillscope/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "spillscope/error.hpp"

namespace spillscope {

namespace {

template <typename Value, typename Keep>
double mean_of(std::span<const ApplicationRecord> records, Value value, Keep keep) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!keep(r)) continue;
    sum += value(r);
    ++n;
  }
  return n == 0 ? std::nan("") : sum / static_cast<double>(n);
}

bool has_domain(std::span<const ApplicationRecord> records, std::string_view domain) {
  for (const auto& r : records) {
    if (r.domain == domain) return true;
  }
  return false;
}

}  // namespace

Ratio spilling_rate(std::int64_t spills, std::int64_t overheads, std::int64_t total_instructions) {
  if (spills < 0 || overheads < 0 || total_instructions < 0) {
    throw std::invalid_argument("spilling_rate: negative count");
  }
  if (total_instructions == 0) throw ZeroInstructions("spilling rate of an empty program");
  return Ratio{spills + overheads, total_instructions};
}

const DomainSummary* CorpusSummary::find(std::string_view domain) const {
  for (const auto& d : domains) {
    if (d.domain == domain) return &d;
  }
  return nullptr;
}

double domain_spill_average(std::span<const ApplicationRecord> records, std::string_view domain) {
  if (!has_domain(records, domain)) {
    throw EmptyDomain("no applications in domain '" + std::string(domain) + "'");
  }
  return mean_of(
      records, [](const ApplicationRecord& r) { return r.spilling_rate; },
      [&](const ApplicationRecord& r) { return r.domain == domain; });
}

double domain_addreg_average(std::span<const ApplicationRecord> records, std::string_view domain,
                             bool apply_exclusions) {
  if (!has_domain(records, domain)) {
    throw EmptyDomain("no applications in domain '" + std::string(domain) + "'");
  }
  const double avg = mean_of(
      records,
      [](const ApplicationRecord& r) { return static_cast<double>(r.additional_registers); },
      [&](const ApplicationRecord& r) {
        return r.domain == domain && !(apply_exclusions && r.exclude_addreg);
      });
  if (std::isnan(avg)) {
    throw AllExcluded("every application in domain '" + std::string(domain) + "' is excluded");
  }
  return avg;
}

long round_up_registers(double avg) {
  if (!(avg >= 0.0)) throw std::invalid_argument("round_up_registers: negative average");
  return static_cast<long>(std::ceil(avg));
}

double reference_line(std::span<const ApplicationRecord> records) {
  if (records.empty()) throw EmptyCorpus("no application records");
  return mean_of(
      records, [](const ApplicationRecord& r) { return r.spilling_rate; },
      [](const ApplicationRecord&) { return true; });
}

CorpusSummary summarize(std::span<const ApplicationRecord> records) {
  if (records.empty()) throw EmptyCorpus("no application records");
  CorpusSummary summary;
  for (const auto& r : records) {
    if (r.domain.empty()) throw std::invalid_argument("application '" + r.name + "' has no domain");
    if (summary.find(r.domain) != nullptr) continue;

    DomainSummary d;
    d.domain = r.domain;
    d.avg_spilling_rate = domain_spill_average(records, r.domain);
    d.avg_additional_registers_raw = domain_addreg_average(records, r.domain, false);
    d.avg_additional_registers_filtered = domain_addreg_average(records, r.domain, true);
    d.rounded_registers = round_up_registers(d.avg_additional_registers_filtered);
    for (const auto& other : records) {
      if (other.domain != r.domain) continue;
      ++d.n_applications;
      if (other.exclude_addreg) ++d.n_excluded;
    }
    summary.domains.push_back(std::move(d));
  }
  summary.reference_line = reference_line(records);
  return summary;
}

double mean_of_domain_means(const CorpusSummary& summary) {
  if (summary.domains.empty()) throw EmptyCorpus("no domains");
  double sum = 0.0;
  for (const auto& d : summary.domains) sum += d.avg_spilling_rate;
  return sum / static_cast<double>(summary.domains.size());
}

}  // namespace spillscope
