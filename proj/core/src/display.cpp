#include "spillscope/display.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace spillscope {

namespace {

// Enough fractional digits to print any finite double exactly.
constexpr int kExactDigits = 1100;

}  // namespace

std::string format_half_up(double value, int decimals) {
  if (decimals < 0 || decimals >= kExactDigits) {
    throw std::invalid_argument("format_half_up: precision out of range");
  }
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value < 0 ? "-inf" : "inf");

  static thread_local std::array<char, kExactDigits + 512> buffer;
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(),
                                       std::fabs(value), std::chars_format::fixed, kExactDigits);
  if (ec != std::errc{}) throw std::runtime_error("format_half_up: conversion failed");
  const std::string_view exact(buffer.data(), static_cast<std::size_t>(end - buffer.data()));

  const auto dot = exact.find('.');
  std::string digits(exact.substr(0, dot));
  const std::string_view frac = exact.substr(dot + 1);
  digits.append(frac.substr(0, static_cast<std::size_t>(decimals)));

  if (frac[static_cast<std::size_t>(decimals)] >= '5') {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == '9') {
      digits[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    if (i < 0) {
      digits.insert(digits.begin(), '1');
    } else {
      ++digits[static_cast<std::size_t>(i)];
    }
  }

  const std::size_t new_int_len = digits.size() - static_cast<std::size_t>(decimals);
  std::string out = digits.substr(0, new_int_len);
  if (decimals > 0) {
    out += '.';
    out += digits.substr(new_int_len);
  }

  const bool all_zero = out.find_first_not_of("0.") == std::string::npos;
  if (std::signbit(value) && !all_zero) out.insert(out.begin(), '-');
  return out;
}

std::string format_trimmed(double value, int max_decimals) {
  std::string out = format_half_up(value, max_decimals);
  if (out.find('.') == std::string::npos) return out;
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

}  // namespace spillscope
