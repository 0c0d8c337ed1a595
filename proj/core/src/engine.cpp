#include "spillscope/engine.hpp"

#include <algorithm>

#include "spillscope/error.hpp"

namespace spillscope {

namespace {

using Anomaly = AnalysisAnomaly::Kind;

void note(AnalyzerState& s, Anomaly kind, int line) { s.anomalies.push_back({kind, line}); }

void adjust_add_reg(AnalyzerState& s, long delta, int line) {
  const bool was_negative = s.add_reg_count < 0;
  s.add_reg_count += delta;
  if (s.add_reg_count < 0 && !was_negative) note(s, Anomaly::NegativeAddReg, line);
}

}  // namespace

std::string_view to_string(AddRegMetric metric) {
  return metric == AddRegMetric::Peak ? "peak" : "end";
}

AddRegMetric parse_metric(std::string_view text) {
  if (text == "peak") return AddRegMetric::Peak;
  if (text == "end") return AddRegMetric::End;
  throw ConfigError("unknown metric '" + std::string(text) + "' (expected peak or end)");
}

std::string_view to_string(AnalysisAnomaly::Kind kind) {
  switch (kind) {
    case Anomaly::CheckUnderflow: return "CheckUnderflow";
    case Anomaly::NegativeAddReg: return "NegativeAddReg";
    case Anomaly::UnmatchedReload: return "UnmatchedReload";
    case Anomaly::BothOperandsSpecial: return "BothOperandsSpecial";
  }
  return "?";
}

void advance(AnalyzerState& s, const Instruction& instr, const SpecialRegisterSet& special) {
  const int line = instr.source_line;
  const auto list_size = static_cast<long>(instr.regs.size());

  switch (instr.kind) {
    case InstrKind::Push:
      ++s.check;
      if (s.check > 1) s.overhead_count += list_size;
      break;

    case InstrKind::Pop:
      if (s.check > 1) s.overhead_count += list_size;
      if (s.check == 0) {
        note(s, Anomaly::CheckUnderflow, line);
      } else {
        --s.check;
      }
      break;

    case InstrKind::RegMove: {
      const RegisterId r1 = instr.dst();
      const RegisterId r2 = instr.src();
      const bool r1_special = special.contains(r1);
      const bool r2_special = special.contains(r2);
      if (r1_special) {
        if (r2_special) note(s, Anomaly::BothOperandsSpecial, line);
        if (s.check == 1) {
          // epilogue restore of a register freed in the prologue
          ++s.overhead_count;
          adjust_add_reg(s, -1, line);
        } else {
          adjust_add_reg(s, +1, line);
          ++s.spill_count;
          s.reg_in_use.set(static_cast<std::size_t>(r1.index()));
        }
      } else if (r2_special) {
        if (s.check == 1) {
          // prologue freeing a special register
          adjust_add_reg(s, +1, line);
          ++s.overhead_count;
        } else {
          ++s.spill_count;
          const auto bit = static_cast<std::size_t>(r2.index());
          if (s.reg_in_use.test(bit)) {
            s.reg_in_use.reset(bit);
            adjust_add_reg(s, -1, line);
          } else {
            note(s, Anomaly::UnmatchedReload, line);
          }
        }
      }
      break;
    }

    case InstrKind::OtherExecutable:
      break;
  }
  s.add_reg_peak = std::max(s.add_reg_peak, s.add_reg_count);
}

AnalyzerState step(AnalyzerState state, const Instruction& instr,
                   const SpecialRegisterSet& special) {
  advance(state, instr, special);
  return state;
}

FunctionStats analyze_function(const FunctionUnit& function, const SpecialRegisterSet& special) {
  AnalyzerState state;
  for (const Instruction& instr : function.instructions) advance(state, instr, special);

  FunctionStats stats;
  stats.function_name = function.name;
  stats.spill_count = state.spill_count;
  stats.overhead_count = state.overhead_count;
  stats.add_reg_peak = state.add_reg_peak;
  stats.add_reg_end = state.add_reg_count;
  stats.instruction_count = static_cast<long>(function.instructions.size());
  stats.anomalies = std::move(state.anomalies);
  return stats;
}

ProgramStats aggregate_functions(std::string program_name, std::vector<FunctionStats> per_function,
                                 AddRegMetric metric) {
  ProgramStats program;
  program.program_name = std::move(program_name);
  program.metric = metric;
  for (const FunctionStats& f : per_function) {
    program.spill_count += f.spill_count;
    program.overhead_count += f.overhead_count;
    program.instruction_count += f.instruction_count;
    program.additional_registers =
        std::max(program.additional_registers, f.additional_registers(metric));
  }
  program.per_function = std::move(per_function);
  return program;
}

ProgramStats analyze_program(const AssemblyUnit& unit, AddRegMetric metric,
                             const SpecialRegisterSet& special) {
  if (unit.functions.empty()) {
    throw EmptyUnit("'" + unit.source_path + "' contains no functions");
  }
  std::vector<FunctionStats> per_function;
  per_function.reserve(unit.functions.size());
  for (const FunctionUnit& f : unit.functions) per_function.push_back(analyze_function(f, special));
  return aggregate_functions(unit.source_path, std::move(per_function), metric);
}

}  // namespace spillscope
