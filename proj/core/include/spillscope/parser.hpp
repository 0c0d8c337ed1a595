#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spillscope/registers.hpp"

namespace spillscope {

enum class InstrKind { Push, Pop, RegMove, OtherExecutable };

std::string_view to_string(InstrKind kind);

// One executable line of a listing, classified for spill analysis.
//
//   Push / Pop      regs = the register list, ascending, duplicate-free
//   RegMove         regs = {dst, src}
//   OtherExecutable regs = {}
struct Instruction {
  InstrKind kind = InstrKind::OtherExecutable;
  std::vector<RegisterId> regs;
  int source_line = 0;
  std::string raw_text;

  RegisterId dst() const { return regs.at(0); }
  RegisterId src() const { return regs.at(1); }

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

enum class Severity { Warning, Error };

enum class DiagnosticCode {
  MalformedLine,     // push/pop/mov operands could not be parsed
  UnparseableLine,   // no mnemonic shape; line skipped
  DuplicateRegister, // register repeated in a push/pop list
  SpecialMovs,       // movs naming a special register (not encodable in THUMB)
  OrphanInstructions,// executable lines before the first function
  EmptyFunction,     // function label without executable instructions
};

std::string_view to_string(DiagnosticCode code);

struct ParseDiagnostic {
  Severity severity = Severity::Warning;
  int line = 0;
  std::string message;
  DiagnosticCode code = DiagnosticCode::MalformedLine;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

struct Directive {
  std::string name;  // lower-case, including the leading '.'
  std::vector<std::string> args;

  friend bool operator==(const Directive&, const Directive&) = default;
};

// A physical line after comment stripping. Any combination of label,
// directive and instruction may be absent; a line with no instruction is a
// non-instruction line.
struct ParsedLine {
  int line = 0;
  std::optional<std::string> label;
  std::optional<Directive> directive;
  std::optional<Instruction> instruction;

  bool is_instruction() const noexcept { return instruction.has_value(); }

  friend bool operator==(const ParsedLine&, const ParsedLine&) = default;
};

struct ParserConfig {
  SpecialRegisterSet special_regs;
  RegisterNames names;
  bool loose_functions = false;

  // Stable textual form used for digests and provenance.
  std::string canonical() const;

  friend bool operator==(const ParserConfig&, const ParserConfig&) = default;
};

struct FunctionUnit {
  std::string name;
  std::vector<Instruction> instructions;
  int start_line = 0;
  int end_line = 0;

  friend bool operator==(const FunctionUnit&, const FunctionUnit&) = default;
};

struct AssemblyUnit {
  std::string source_path;
  std::vector<FunctionUnit> functions;
  std::vector<ParseDiagnostic> diagnostics;

  std::size_t instruction_count() const noexcept;

  friend bool operator==(const AssemblyUnit&, const AssemblyUnit&) = default;
};

// Classifies one physical line. Problems are appended to `diagnostics`
// when it is non-null.
ParsedLine parse_line(std::string_view text, int line_no, const ParserConfig& config,
                      std::vector<ParseDiagnostic>* diagnostics = nullptr);

// Convenience overload with the default configuration.
ParsedLine parse_line(std::string_view text);

// Groups classified lines into functions. Strict mode only starts functions
// at labels named by `.type <name>, %function`, `.thumb_func` or `.func`;
// loose mode additionally starts one at any non-local label whose next
// significant line is an instruction. Throws NoFunctionsFound.
std::vector<FunctionUnit> segment_functions(std::span<const ParsedLine> lines, bool loose,
                                            std::vector<ParseDiagnostic>& diagnostics);

// Throws NoFunctionsFound.
AssemblyUnit parse_unit(std::string_view text, const ParserConfig& config,
                        std::string source_path = "<memory>");

// Throws IoError when the file cannot be read, NoFunctionsFound as above.
AssemblyUnit parse_file(const std::filesystem::path& path, const ParserConfig& config);

}  // namespace spillscope
