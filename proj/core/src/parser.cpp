#include "spillscope/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "spillscope/error.hpp"
#include "text.hpp"

namespace spillscope {

namespace {

void add_diag(std::vector<ParseDiagnostic>* diagnostics, int line, DiagnosticCode code,
              std::string message) {
  if (diagnostics == nullptr) return;
  diagnostics->push_back({Severity::Warning, line, std::move(message), code});
}

// Removes end-of-line comments and single-line block comments, leaving
// quoted strings alone. `#` only starts a comment in the first column
// position; elsewhere it prefixes an immediate.
std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string_view::npos && text[first] == '#') return out;

  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < text.size()) {
        out += text[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    if (c == '@') {
      // `.type f, @function` is the ELF spelling some toolchains emit even
      // for ARM, where '@' otherwise starts a comment.
      if (text.substr(i, 9) == "@function") {
        out += "%function";
        i += 8;
        continue;
      }
      break;
    }
    if (c == ';') break;
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') break;
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const auto close = text.find("*/", i + 2);
      if (close == std::string_view::npos) break;
      out += ' ';
      i = close + 1;
      continue;
    }
    out += c;
  }
  return out;
}

// Length of a leading "label:" (identifier or numeric local label), or 0.
std::size_t label_length(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) {
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  } else if (!s.empty() && detail::is_ident_start(s[0])) {
    while (i < s.size() && detail::is_ident_char(s[i])) ++i;
  }
  if (i == 0 || i >= s.size() || s[i] != ':') return 0;
  return i;
}

std::size_t mnemonic_length(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return 0;
  std::size_t i = 1;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                          s[i] == '.')) {
    ++i;
  }
  if (i < s.size() && !detail::is_space(s[i]) && s[i] != '{') return 0;
  return i;
}

std::string base_mnemonic(std::string_view token) {
  std::string m = detail::to_lower(token);
  if (m.size() > 2 && (m.ends_with(".n") || m.ends_with(".w"))) m.resize(m.size() - 2);
  return m;
}

Instruction make(InstrKind kind, std::vector<RegisterId> regs, int line, std::string_view raw) {
  return Instruction{kind, std::move(regs), line, std::string(raw)};
}

Instruction classify_stack_op(InstrKind kind, std::string_view mnemonic, std::string_view operands,
                              int line, std::string_view raw, const ParserConfig& config,
                              std::vector<ParseDiagnostic>* diagnostics) {
  const auto body = detail::trim(operands);
  std::optional<std::vector<RegisterId>> regs;
  if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
    regs = parse_register_list(body.substr(1, body.size() - 2), config.names);
  }
  if (!regs || regs->empty()) {
    add_diag(diagnostics, line, DiagnosticCode::MalformedLine,
             "malformed register list for " + std::string(mnemonic) + ": '" +
                 std::string(body) + "'");
    return make(InstrKind::OtherExecutable, {}, line, raw);
  }
  std::sort(regs->begin(), regs->end());
  const auto unique_end = std::unique(regs->begin(), regs->end());
  if (unique_end != regs->end()) {
    add_diag(diagnostics, line, DiagnosticCode::DuplicateRegister,
             "duplicate register in " + std::string(mnemonic) + " list");
    regs->erase(unique_end, regs->end());
  }
  return make(kind, std::move(*regs), line, raw);
}

Instruction classify_move(std::string_view mnemonic, std::string_view operands, int line,
                          std::string_view raw, const ParserConfig& config,
                          std::vector<ParseDiagnostic>* diagnostics) {
  const auto parts = detail::split_top_level(operands, ',');
  const bool missing = parts.size() < 2 ||
                       std::any_of(parts.begin(), parts.end(),
                                   [](std::string_view p) { return p.empty(); });
  const auto dst = missing ? std::nullopt : config.names.lookup(parts[0]);
  if (!dst) {
    add_diag(diagnostics, line, DiagnosticCode::MalformedLine,
             "malformed operands for " + std::string(mnemonic) + ": '" +
                 std::string(detail::trim(operands)) + "'");
    return make(InstrKind::OtherExecutable, {}, line, raw);
  }
  if (parts.size() != 2) return make(InstrKind::OtherExecutable, {}, line, raw);
  const auto src = config.names.lookup(parts[1]);
  if (!src) return make(InstrKind::OtherExecutable, {}, line, raw);

  if (mnemonic == "movs" &&
      (config.special_regs.contains(*dst) || config.special_regs.contains(*src))) {
    add_diag(diagnostics, line, DiagnosticCode::SpecialMovs,
             "movs cannot name a special register in THUMB state; treated as mov");
  }
  return make(InstrKind::RegMove, {*dst, *src}, line, raw);
}

bool is_function_type(const Directive& d) {
  if (d.name != ".type" || d.args.size() < 2) return false;
  const std::string kind = detail::to_lower(d.args[1]);
  return kind == "%function" || kind == "#function" || kind == "stt_func";
}

bool is_top_level_label(std::string_view name) {
  return !name.empty() && name.front() != '.' && name.front() != '$' &&
         !std::isdigit(static_cast<unsigned char>(name.front()));
}

}  // namespace

std::string_view to_string(InstrKind kind) {
  switch (kind) {
    case InstrKind::Push: return "push";
    case InstrKind::Pop: return "pop";
    case InstrKind::RegMove: return "regmove";
    case InstrKind::OtherExecutable: return "other";
  }
  return "?";
}

std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::MalformedLine: return "MalformedLine";
    case DiagnosticCode::UnparseableLine: return "UnparseableLine";
    case DiagnosticCode::DuplicateRegister: return "DuplicateRegister";
    case DiagnosticCode::SpecialMovs: return "SpecialMovs";
    case DiagnosticCode::OrphanInstructions: return "OrphanInstructions";
    case DiagnosticCode::EmptyFunction: return "EmptyFunction";
  }
  return "?";
}

std::string ParserConfig::canonical() const {
  std::ostringstream out;
  out << "special=" << special_regs.to_string() << ";aliases=";
  bool first = true;
  for (const auto& [alias, reg] : names.aliases()) {
    if (!first) out << ',';
    out << alias << ':' << reg.name();
    first = false;
  }
  out << ";loose=" << (loose_functions ? 1 : 0);
  return out.str();
}

std::size_t AssemblyUnit::instruction_count() const noexcept {
  std::size_t n = 0;
  for (const auto& f : functions) n += f.instructions.size();
  return n;
}

ParsedLine parse_line(std::string_view text, int line_no, const ParserConfig& config,
                      std::vector<ParseDiagnostic>* diagnostics) {
  ParsedLine out;
  out.line = line_no;

  const std::string code = strip_comments(text);
  std::string_view rest = detail::trim(code);

  while (const auto n = label_length(rest)) {
    out.label = std::string(rest.substr(0, n));
    rest = detail::trim(rest.substr(n + 1));
  }
  if (rest.empty()) return out;

  if (rest.front() == '.') {
    std::size_t n = 1;
    while (n < rest.size() && detail::is_ident_char(rest[n])) ++n;
    Directive d;
    d.name = detail::to_lower(rest.substr(0, n));
    const auto args = detail::trim(rest.substr(n));
    if (!args.empty()) {
      for (auto a : detail::split_top_level(args, ',')) d.args.emplace_back(a);
    }
    out.directive = std::move(d);
    return out;
  }

  const std::size_t n = mnemonic_length(rest);
  if (n == 0) {
    add_diag(diagnostics, line_no, DiagnosticCode::UnparseableLine,
             "skipped line without a mnemonic: '" + std::string(rest) + "'");
    return out;
  }
  const std::string mnemonic = base_mnemonic(rest.substr(0, n));
  const std::string_view operands = detail::trim(rest.substr(n));
  const std::string_view raw = detail::trim(text);

  if (mnemonic == "push") {
    out.instruction =
        classify_stack_op(InstrKind::Push, mnemonic, operands, line_no, raw, config, diagnostics);
  } else if (mnemonic == "pop") {
    out.instruction =
        classify_stack_op(InstrKind::Pop, mnemonic, operands, line_no, raw, config, diagnostics);
  } else if (mnemonic == "mov" || mnemonic == "movs") {
    out.instruction = classify_move(mnemonic, operands, line_no, raw, config, diagnostics);
  } else {
    out.instruction = make(InstrKind::OtherExecutable, {}, line_no, raw);
  }
  return out;
}

ParsedLine parse_line(std::string_view text) { return parse_line(text, 0, ParserConfig{}); }

std::vector<FunctionUnit> segment_functions(std::span<const ParsedLine> lines, bool loose,
                                            std::vector<ParseDiagnostic>& diagnostics) {
  std::vector<FunctionUnit> functions;
  std::set<std::string> marked;
  bool thumb_func_pending = false;
  std::optional<FunctionUnit> current;
  int orphan_count = 0;
  int first_orphan_line = 0;

  auto finish = [&] {
    if (!current) return;
    if (current->instructions.empty()) {
      diagnostics.push_back({Severity::Warning, current->start_line,
                             "function '" + current->name + "' has no instructions; dropped",
                             DiagnosticCode::EmptyFunction});
    } else {
      current->end_line = current->instructions.back().source_line;
      functions.push_back(std::move(*current));
    }
    current.reset();
  };

  auto followed_by_instruction = [&](std::size_t i) {
    if (lines[i].is_instruction()) return true;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& next = lines[j];
      if (next.is_instruction()) return true;
      if (next.label || next.directive) return false;
    }
    return false;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const ParsedLine& pl = lines[i];

    if (pl.label) {
      const std::string& name = *pl.label;
      bool starts = marked.contains(name) || thumb_func_pending;
      if (!starts && loose) starts = is_top_level_label(name) && followed_by_instruction(i);
      thumb_func_pending = false;
      if (starts) {
        finish();
        current = FunctionUnit{name, {}, pl.line, pl.line};
      }
    }

    if (pl.directive) {
      const Directive& d = *pl.directive;
      if (is_function_type(d)) {
        marked.insert(d.args[0]);
      } else if (d.name == ".thumb_func") {
        thumb_func_pending = true;
      } else if (d.name == ".func" && !d.args.empty()) {
        marked.insert(d.args[0]);
      }
    }

    if (pl.instruction) {
      if (current) {
        current->instructions.push_back(*pl.instruction);
      } else {
        if (orphan_count++ == 0) first_orphan_line = pl.line;
      }
    }
  }
  finish();

  if (orphan_count > 0) {
    diagnostics.push_back({Severity::Warning, first_orphan_line,
                           std::to_string(orphan_count) +
                               " instruction(s) outside any function were ignored",
                           DiagnosticCode::OrphanInstructions});
  }
  if (functions.empty()) {
    throw NoFunctionsFound(loose ? "no functions found"
                                 : "no functions found (no .type/.thumb_func markers; "
                                   "try --loose-functions)");
  }
  return functions;
}

AssemblyUnit parse_unit(std::string_view text, const ParserConfig& config,
                        std::string source_path) {
  AssemblyUnit unit;
  unit.source_path = std::move(source_path);

  std::vector<ParsedLine> lines;
  bool in_block_comment = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view physical = text.substr(pos, eol - pos);
    if (!physical.empty() && physical.back() == '\r') physical.remove_suffix(1);
    ++line_no;
    pos = eol + 1;

    // Multi-line /* */ comments are removed here; parse_line handles the
    // single-line form.
    std::string cleaned;
    std::string_view remaining = physical;
    while (!remaining.empty()) {
      if (in_block_comment) {
        const auto close = remaining.find("*/");
        if (close == std::string_view::npos) {
          remaining = {};
        } else {
          remaining.remove_prefix(close + 2);
          in_block_comment = false;
        }
        continue;
      }
      const auto open = remaining.find("/*");
      if (open == std::string_view::npos) {
        cleaned += remaining;
        break;
      }
      const auto close = remaining.find("*/", open + 2);
      if (close == std::string_view::npos) {
        cleaned += remaining.substr(0, open);
        in_block_comment = true;
        remaining = {};
      } else {
        cleaned += remaining.substr(0, close + 2);
        remaining.remove_prefix(close + 2);
      }
    }

    ParsedLine pl = parse_line(cleaned, line_no, config, &unit.diagnostics);
    if (pl.label || pl.directive || pl.instruction) lines.push_back(std::move(pl));
    if (eol == text.size()) break;
  }

  unit.functions = segment_functions(lines, config.loose_functions, unit.diagnostics);
  std::stable_sort(unit.diagnostics.begin(), unit.diagnostics.end(),
                   [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
                     return a.line < b.line;
                   });
  return unit;
}

AssemblyUnit parse_file(const std::filesystem::path& path, const ParserConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return parse_unit(buffer.str(), config, path.string());
}

}  // namespace spillscope
