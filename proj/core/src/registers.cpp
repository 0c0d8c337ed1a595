#include "spillscope/registers.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <utility>

#include "spillscope/error.hpp"
#include "text.hpp"

namespace spillscope {

namespace {

constexpr std::array<std::pair<std::string_view, int>, 7> kStandardAliases{{
    {"sb", 9},
    {"sl", 10},
    {"fp", 11},
    {"ip", 12},
    {"sp", 13},
    {"lr", 14},
    {"pc", 15},
}};

std::optional<RegisterId> lookup_builtin(std::string_view lower) {
  if (lower.size() >= 2 && lower.size() <= 3 && lower[0] == 'r') {
    // Reject leading zeros ("r05") so that each register has one spelling.
    if (lower.size() == 3 && lower[1] == '0') return std::nullopt;
    int index = -1;
    const auto* first = lower.data() + 1;
    const auto* last = lower.data() + lower.size();
    auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec == std::errc{} && ptr == last && index >= 0 && index < kRegisterCount) {
      return RegisterId{index};
    }
    return std::nullopt;
  }
  for (const auto& [alias, index] : kStandardAliases) {
    if (alias == lower) return RegisterId{index};
  }
  return std::nullopt;
}

}  // namespace

RegisterId::RegisterId(int index) : index_(0) {
  if (index < 0 || index >= kRegisterCount) {
    throw std::out_of_range("register index " + std::to_string(index) + " out of range");
  }
  index_ = static_cast<std::uint8_t>(index);
}

SpecialRegisterSet::SpecialRegisterSet() {
  for (int i = 8; i <= 12; ++i) bits_.set(static_cast<std::size_t>(i));
}

SpecialRegisterSet SpecialRegisterSet::parse(std::string_view list) {
  auto regs = parse_register_list(list, RegisterNames{});
  if (!regs || regs->empty()) {
    throw ConfigError("invalid special register list '" + std::string(list) + "'");
  }
  std::bitset<kRegisterCount> bits;
  for (RegisterId r : *regs) bits.set(static_cast<std::size_t>(r.index()));
  return from_bits(bits);
}

SpecialRegisterSet SpecialRegisterSet::from_bits(std::bitset<kRegisterCount> bits) {
  SpecialRegisterSet set;
  set.bits_ = bits;
  return set;
}

std::string SpecialRegisterSet::to_string() const {
  std::string out;
  for (int i = 0; i < kRegisterCount; ++i) {
    if (!bits_.test(static_cast<std::size_t>(i))) continue;
    if (!out.empty()) out += ',';
    out += "r" + std::to_string(i);
  }
  return out;
}

bool is_special(RegisterId r, const SpecialRegisterSet& set) { return set.contains(r); }

bool is_regular(RegisterId r, const SpecialRegisterSet& set) { return !set.contains(r); }

void RegisterNames::add_alias(std::string_view alias, std::string_view target) {
  const std::string key = detail::to_lower(detail::trim(alias));
  if (key.empty() || !detail::is_ident_start(key.front()) || key.front() == '.') {
    throw ConfigError("invalid register alias '" + std::string(alias) + "'");
  }
  for (char c : key) {
    if (!detail::is_ident_char(c)) {
      throw ConfigError("invalid register alias '" + std::string(alias) + "'");
    }
  }
  if (lookup_builtin(key)) {
    throw ConfigError("alias '" + key + "' shadows a built-in register name");
  }
  auto resolved = lookup(detail::trim(target));
  if (!resolved) {
    throw ConfigError("alias target '" + std::string(target) + "' is not a register");
  }
  aliases_.insert_or_assign(key, *resolved);
}

void RegisterNames::add_alias_spec(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("alias must be written alias=register, got '" + std::string(spec) + "'");
  }
  add_alias(spec.substr(0, eq), spec.substr(eq + 1));
}

std::optional<RegisterId> RegisterNames::lookup(std::string_view token) const {
  const std::string lower = detail::to_lower(token);
  if (auto r = lookup_builtin(lower)) return r;
  if (auto it = aliases_.find(lower); it != aliases_.end()) return it->second;
  return std::nullopt;
}

RegisterId RegisterNames::resolve(std::string_view token) const {
  if (auto r = lookup(token)) return *r;
  throw UnknownRegister(std::string(token));
}

RegisterId normalize_register_name(std::string_view token, const RegisterNames& names) {
  return names.resolve(detail::trim(token));
}

std::optional<std::vector<RegisterId>> parse_register_list(std::string_view list,
                                                           const RegisterNames& names) {
  std::vector<RegisterId> out;
  if (detail::trim(list).empty()) return out;
  for (std::string_view item : detail::split_top_level(list, ',')) {
    if (item.empty()) return std::nullopt;
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      auto r = names.lookup(item);
      if (!r) return std::nullopt;
      out.push_back(*r);
      continue;
    }
    auto lo = names.lookup(detail::trim(item.substr(0, dash)));
    auto hi = names.lookup(detail::trim(item.substr(dash + 1)));
    if (!lo || !hi || hi->index() < lo->index()) return std::nullopt;
    for (int i = lo->index(); i <= hi->index(); ++i) out.emplace_back(i);
  }
  return out;
}

}  // namespace spillscope
