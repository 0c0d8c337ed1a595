#pragma once

#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spillscope {

inline constexpr int kRegisterCount = 16;

// An ARM core register r0..r15.
class RegisterId {
 public:
  // Throws std::out_of_range unless 0 <= index < 16.
  explicit RegisterId(int index);

  constexpr int index() const noexcept { return index_; }
  std::string name() const { return "r" + std::to_string(index_); }

  friend constexpr auto operator<=>(RegisterId, RegisterId) = default;

 private:
  std::uint8_t index_;
};

// The registers a THUMB-state core cannot name in most 16-bit encodings.
// Defaults to r8-r12; everything outside the set is a regular register.
class SpecialRegisterSet {
 public:
  SpecialRegisterSet();

  // Accepts a register list such as "r8-r12", "r8,r9,sl" or "r9-r11,ip".
  // Throws ConfigError on an empty or malformed list.
  static SpecialRegisterSet parse(std::string_view list);
  static SpecialRegisterSet from_bits(std::bitset<kRegisterCount> bits);

  bool contains(RegisterId r) const noexcept { return bits_.test(r.index()); }
  std::size_t size() const noexcept { return bits_.count(); }
  std::bitset<kRegisterCount> bits() const noexcept { return bits_; }

  // Canonical "r8,r9,..." rendering, used in config digests.
  std::string to_string() const;

  friend bool operator==(const SpecialRegisterSet&, const SpecialRegisterSet&) = default;

 private:
  std::bitset<kRegisterCount> bits_;
};

bool is_special(RegisterId r, const SpecialRegisterSet& set = SpecialRegisterSet{});
bool is_regular(RegisterId r, const SpecialRegisterSet& set = SpecialRegisterSet{});

// Register-name table: r0..r15 plus the standard aliases sb, sl, fp, ip, sp,
// lr, pc. Extra aliases (the `s1` spelling some listings use for sl) are
// added explicitly. Lookups are case-insensitive.
class RegisterNames {
 public:
  RegisterNames() = default;

  // `target` is resolved through the table at call time, so
  // add_alias("s1", "sl") maps s1 to r10. Throws ConfigError when
  // `alias` is empty, not an identifier, or shadows a built-in name.
  void add_alias(std::string_view alias, std::string_view target);

  // Parses "alias=target".
  void add_alias_spec(std::string_view spec);

  std::optional<RegisterId> lookup(std::string_view token) const;

  // Throws UnknownRegister.
  RegisterId resolve(std::string_view token) const;

  const std::map<std::string, RegisterId>& aliases() const noexcept { return aliases_; }

  friend bool operator==(const RegisterNames&, const RegisterNames&) = default;

 private:
  std::map<std::string, RegisterId> aliases_;
};

RegisterId normalize_register_name(std::string_view token,
                                   const RegisterNames& names = RegisterNames{});

// Parses a comma-separated list whose items are registers or ascending
// ranges ("r4-r7"). Returns nullopt on any malformed item. Duplicates are
// kept; callers decide how to treat them.
std::optional<std::vector<RegisterId>> parse_register_list(std::string_view list,
                                                           const RegisterNames& names);

}  // namespace spillscope
