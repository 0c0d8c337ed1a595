#pragma once

#include <string>

namespace spillscope {

// Display precision for every emitted number. Table emitters go through
// these so that all output formats agree textually.
namespace precision {
inline constexpr int kRate = 3;              // per-application and domain spilling rates
inline constexpr int kAddRegAverage = 1;     // raw additional-register averages
inline constexpr int kFilteredAverage = 2;   // outlier-filtered averages, trailing zeros trimmed
inline constexpr int kReferenceLine = 4;
}  // namespace precision

// Rounds the exact binary value of `value` to `decimals` places, ties away
// from zero, and prints it in fixed notation. A double that merely displays
// as a tie (0.1405 stored as 0.14049999...) rounds by its true value.
std::string format_half_up(double value, int decimals);

// format_half_up, then drops trailing zeros and a dangling decimal point:
// 9.20 -> "9.2", 5.00 -> "5".
std::string format_trimmed(double value, int max_decimals);

}  // namespace spillscope
