#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spillscope {

// Environment variable that, when set, replaces the wall-clock timestamp in
// every emitted document so that runs are byte-comparable.
inline constexpr const char* kPinTimeEnv = "SPILLSCOPE_PIN_TIME";

struct Provenance {
  std::string tool_version;
  std::string config_digest;  // 16 hex digits
  std::string timestamp;      // ISO-8601 UTC, or the pinned value

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

std::string_view tool_version();

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data);

std::string config_digest(std::string_view canonical_config);

// Reads kPinTimeEnv; falls back to the current UTC time.
Provenance make_provenance(std::string_view canonical_config);

}  // namespace spillscope
