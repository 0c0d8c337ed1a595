#include "spillscope/provenance.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>

namespace spillscope {

std::string_view tool_version() { return SPILLSCOPE_VERSION; }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string config_digest(std::string_view canonical_config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config)));
  return buf;
}

Provenance make_provenance(std::string_view canonical_config) {
  Provenance p;
  p.tool_version = std::string(tool_version());
  p.config_digest = config_digest(canonical_config);
  if (const char* pinned = std::getenv(kPinTimeEnv); pinned != nullptr && *pinned != '\0') {
    p.timestamp = pinned;
    return p;
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  p.timestamp = buf;
  return p;
}

}  // namespace spillscope
