#pragma once

#include <bitset>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spillscope/parser.hpp"
#include "spillscope/registers.hpp"

namespace spillscope {

// Which per-function value feeds a program's additional-register figure.
//   Peak: highest add_reg_count seen during the scan (default)
//   End:  add_reg_count after the last instruction
enum class AddRegMetric { Peak, End };

std::string_view to_string(AddRegMetric metric);
// Accepts "peak" or "end"; throws ConfigError otherwise.
AddRegMetric parse_metric(std::string_view text);

struct AnalysisAnomaly {
  enum class Kind { CheckUnderflow, NegativeAddReg, UnmatchedReload, BothOperandsSpecial };
  Kind kind;
  int line = 0;

  friend bool operator==(const AnalysisAnomaly&, const AnalysisAnomaly&) = default;
};

std::string_view to_string(AnalysisAnomaly::Kind kind);

// Counters of the spill / additional-register scan.
//
// `check` is the push depth: depth 1 is the prologue/epilogue frame, whose
// push and pop are free and whose special-register moves are overhead.
// Anything deeper is spill traffic. `reg_in_use` holds special registers
// that currently carry a spilled value.
struct AnalyzerState {
  int check = 0;
  long spill_count = 0;
  long overhead_count = 0;
  long add_reg_count = 0;
  long add_reg_peak = 0;
  std::bitset<kRegisterCount> reg_in_use;
  std::vector<AnalysisAnomaly> anomalies;

  friend bool operator==(const AnalyzerState&, const AnalyzerState&) = default;
};

// In-place form of step(); used by the folds below.
void advance(AnalyzerState& state, const Instruction& instr,
             const SpecialRegisterSet& special = SpecialRegisterSet{});

AnalyzerState step(AnalyzerState state, const Instruction& instr,
                   const SpecialRegisterSet& special = SpecialRegisterSet{});

struct FunctionStats {
  std::string function_name;
  long spill_count = 0;
  long overhead_count = 0;
  long add_reg_peak = 0;
  long add_reg_end = 0;
  long instruction_count = 0;
  std::vector<AnalysisAnomaly> anomalies;

  long additional_registers(AddRegMetric metric) const noexcept {
    return metric == AddRegMetric::Peak ? add_reg_peak : add_reg_end;
  }

  friend bool operator==(const FunctionStats&, const FunctionStats&) = default;
};

struct ProgramStats {
  std::string program_name;
  std::vector<FunctionStats> per_function;
  long spill_count = 0;
  long overhead_count = 0;
  long instruction_count = 0;
  long additional_registers = 0;
  AddRegMetric metric = AddRegMetric::Peak;

  friend bool operator==(const ProgramStats&, const ProgramStats&) = default;
};

FunctionStats analyze_function(const FunctionUnit& function,
                               const SpecialRegisterSet& special = SpecialRegisterSet{});

// Sums the counters and takes the max of the selected per-function metric,
// floored at 0. Throws EmptyUnit when there are no functions.
ProgramStats analyze_program(const AssemblyUnit& unit, AddRegMetric metric = AddRegMetric::Peak,
                             const SpecialRegisterSet& special = SpecialRegisterSet{});

// Builds program stats from already-analyzed functions; `per_function` may
// span several files.
ProgramStats aggregate_functions(std::string program_name, std::vector<FunctionStats> per_function,
                                 AddRegMetric metric);

}  // namespace spillscope
