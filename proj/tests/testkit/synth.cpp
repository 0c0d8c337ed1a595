#include "synth.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace spillscope::testkit {

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

std::string spell(int index, Rng& rng) {
  static const std::map<int, std::vector<std::string>> kSpellings = {
      {9, {"r9", "sb", "R9"}},   {10, {"r10", "sl", "SL"}}, {11, {"r11", "fp"}},
      {12, {"r12", "ip", "IP"}}, {13, {"sp", "r13"}},       {14, {"lr", "r14", "LR"}},
      {15, {"pc", "r15"}},
  };
  if (auto it = kSpellings.find(index); it != kSpellings.end()) return pick(rng, it->second);
  return chance(rng, 0.15) ? "R" + std::to_string(index) : "r" + std::to_string(index);
}

std::string mnemonic(std::string_view base, Rng& rng) {
  std::string m(base);
  if (chance(rng, 0.1)) {
    std::transform(m.begin(), m.end(), m.begin(), ::toupper);
  }
  return m;
}

std::string separator(Rng& rng) { return chance(rng, 0.5) ? "\t" : " "; }

std::string comma(Rng& rng) { return chance(rng, 0.5) ? ", " : ","; }

std::string trailing_comment(Rng& rng) {
  switch (uniform(rng, 0, 9)) {
    case 0: return "\t@ spill slot";
    case 1: return " // note";
    case 2: return " /* tmp */";
    default: return "";
  }
}

std::string render_list(const std::vector<RegisterId>& regs, Rng& rng) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < regs.size();) {
    std::size_t j = i;
    while (j + 1 < regs.size() && regs[j + 1].index() == regs[j].index() + 1) ++j;
    if (!first) out += comma(rng);
    first = false;
    if (j >= i + 2 && chance(rng, 0.5)) {
      out += spell(regs[i].index(), rng) + "-" + spell(regs[j].index(), rng);
      i = j + 1;
    } else {
      out += spell(regs[i].index(), rng);
      ++i;
    }
  }
  return out + "}";
}

// Executable instructions that never touch r8-r12 and never push/pop. With
// allow_moves, some are register-to-register movs between regular registers.
std::string filler_line(Rng& rng, bool allow_moves = true) {
  const int a = uniform(rng, 0, 7);
  const int b = uniform(rng, 0, 7);
  const int c = uniform(rng, 0, 7);
  const std::string ra = "r" + std::to_string(a);
  const std::string rb = "r" + std::to_string(b);
  const std::string rc = "r" + std::to_string(c);
  int choice = uniform(rng, 0, 11);
  while (!allow_moves && (choice == 5 || choice == 9 || choice == 10)) choice = uniform(rng, 0, 11);
  switch (choice) {
    case 0: return "adds" + separator(rng) + ra + ", " + rb + ", " + rc;
    case 1: return "ldr" + separator(rng) + ra + ", [sp, #" + std::to_string(4 * b) + "]";
    case 2: return "str" + separator(rng) + ra + ", [" + rb + ", #4]";
    case 3: return "bl" + separator(rng) + "helper_" + std::to_string(a);
    case 4: return "cmp" + separator(rng) + ra + ", #" + std::to_string(c);
    case 5: return "mov" + separator(rng) + ra + ", " + rb;  // regular-only move
    case 6: return "movs" + separator(rng) + ra + ", #" + std::to_string(b);
    case 7: return "lsls" + separator(rng) + ra + ", " + rb + ", #2";
    case 8: return "bne" + separator(rng) + ".L" + std::to_string(a);
    case 9: return "mov" + separator(rng) + ra + ", sp";
    case 10: return "mov.n" + separator(rng) + ra + ", " + rb;
    default: return "subs" + separator(rng) + ra + ", #1";
  }
}

std::string noise_line(Rng& rng) {
  switch (uniform(rng, 0, 4)) {
    case 0: return ".L" + std::to_string(uniform(rng, 1, 99)) + ":";
    case 1: return "\t@ -- scheduling barrier --";
    case 2: return "";
    case 3: return "\t.align\t2";
    default: return "# 12 \"source.c\" 1";
  }
}

struct Emitter {
  Rng& rng;
  std::ostringstream out;
  long instructions = 0;

  void instr(const std::string& text) {
    out << '\t' << text << trailing_comment(rng) << '\n';
    ++instructions;
  }
  void raw(const std::string& text) { out << text << '\n'; }

  // Filler followed, occasionally, by a non-instruction line.
  void filler(int count) {
    for (int i = 0; i < count; ++i) {
      instr(filler_line(rng));
      if (chance(rng, 0.2)) raw(noise_line(rng));
    }
  }
};

std::vector<RegisterId> low_registers(Rng& rng, int count) {
  std::vector<int> pool{0, 1, 2, 3, 4, 5, 6, 7};
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<RegisterId> out;
  for (int i = 0; i < count; ++i) out.emplace_back(pool[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<RegisterId> sorted(std::vector<RegisterId> regs) {
  std::sort(regs.begin(), regs.end());
  return regs;
}

void validate(const SynthSpec& spec) {
  if (spec.n_prologue_frees < 0 || spec.n_prologue_frees > 5) {
    throw InvalidSpec("n_prologue_frees must be in 0..5");
  }
  if (spec.filler_instructions < 0) throw InvalidSpec("filler_instructions must be >= 0");
  const SpecialRegisterSet special;
  std::set<int> held_without_reload;
  for (const auto& e : spec.spill_events) {
    if (!special.contains(e.spill_reg)) {
      throw InvalidSpec("spill register " + e.spill_reg.name() + " is not special");
    }
    if (held_without_reload.contains(e.spill_reg.index())) {
      throw InvalidSpec("spill into " + e.spill_reg.name() +
                        " which still holds a value that is never reloaded");
    }
    if (!e.reload) held_without_reload.insert(e.spill_reg.index());
  }
}

}  // namespace

std::string describe(const GroundTruth& t) {
  std::ostringstream out;
  out << "{spills=" << t.spill_count << " overheads=" << t.overhead_count
      << " peak=" << t.add_reg_peak << " end=" << t.add_reg_end
      << " instructions=" << t.instruction_count << "}";
  return out.str();
}

std::string describe(const SynthSpec& s) {
  std::ostringstream out;
  out << "spec " << s.seed << ' ' << s.n_prologue_frees << ' ' << s.filler_instructions << ' ';
  if (s.spill_events.empty()) out << '-';
  for (std::size_t i = 0; i < s.spill_events.size(); ++i) {
    if (i != 0) out << ',';
    out << s.spill_events[i].spill_reg.name() << (s.spill_events[i].reload ? '+' : '-');
  }
  return out.str();
}

SynthFunction generate(const SynthSpec& spec, std::string name) {
  validate(spec);
  Rng rng(spec.seed);
  Emitter em{rng, {}, 0};

  const int k = spec.n_prologue_frees;
  const bool nested = k > 0 || !spec.spill_events.empty();
  const int m = k > 0 ? k : (nested ? uniform(rng, 1, 2) : 0);

  // Spread filler over the three regions.
  const int filler_total = spec.filler_instructions;
  const int filler_head = uniform(rng, 0, filler_total);
  const int filler_tail = uniform(rng, 0, filler_total - filler_head);
  int filler_body = filler_total - filler_head - filler_tail;
  if (!nested) {
    // No nested region: the body filler goes to the tail instead.
    filler_body = 0;
  }
  const int filler_tail_total = filler_total - filler_head - filler_body;

  std::vector<int> specials{8, 9, 10, 11, 12};
  std::shuffle(specials.begin(), specials.end(), rng);
  std::vector<RegisterId> freed;
  for (int i = 0; i < k; ++i) freed.emplace_back(specials[static_cast<std::size_t>(i)]);

  std::vector<RegisterId> saved;
  for (int r = 4; r <= 7; ++r) {
    if (chance(rng, 0.7)) saved.emplace_back(r);
  }
  std::vector<RegisterId> prologue = saved;
  prologue.emplace_back(14);
  std::vector<RegisterId> epilogue = saved;
  epilogue.emplace_back(15);

  em.raw("\t.text");
  em.raw("\t.align\t2");
  em.raw("\t.global\t" + name);
  em.raw("\t.type\t" + name + ", %function");
  if (chance(rng, 0.5)) em.raw("\t.thumb_func");
  em.raw(name + ":");
  em.instr(mnemonic("push", rng) + separator(rng) + render_list(prologue, rng));
  em.filler(filler_head);

  const std::vector<RegisterId> frame_in = low_registers(rng, m);
  for (int i = 0; i < k; ++i) {
    em.instr(mnemonic("mov", rng) + separator(rng) + spell(frame_in[static_cast<std::size_t>(i)].index(), rng) +
             comma(rng) + spell(freed[static_cast<std::size_t>(i)].index(), rng));
  }
  long held = 0;
  long peak_held = 0;
  long stores = 0;
  long reloads = 0;

  if (nested) {
    em.instr(mnemonic("push", rng) + separator(rng) + render_list(sorted(frame_in), rng));

    // Filler slots between events.
    const std::size_t slots = spec.spill_events.size() + 1;
    std::vector<int> slot_filler(slots, 0);
    for (int i = 0; i < filler_body; ++i) {
      ++slot_filler[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(slots) - 1))];
    }

    std::vector<RegisterId> pending;  // spilled, reload still to come
    auto emit_reload = [&](std::size_t index) {
      const RegisterId reg = pending[index];
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(index));
      em.instr(mnemonic("mov", rng) + separator(rng) + spell(uniform(rng, 0, 7), rng) + comma(rng) +
               spell(reg.index(), rng));
      ++reloads;
      --held;
    };

    for (std::size_t e = 0; e < spec.spill_events.size(); ++e) {
      em.filler(slot_filler[e]);
      const SpillEvent& event = spec.spill_events[e];
      // A register must be reloaded before it is reused for another spill.
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (pending[i] == event.spill_reg) {
          emit_reload(i);
          break;
        }
      }
      while (!pending.empty() && chance(rng, 0.35)) {
        emit_reload(static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pending.size()) - 1)));
      }
      em.instr(mnemonic("mov", rng) + separator(rng) + spell(event.spill_reg.index(), rng) +
               comma(rng) + spell(uniform(rng, 0, 7), rng));
      ++stores;
      ++held;
      peak_held = std::max(peak_held, held);
      if (event.reload) pending.push_back(event.spill_reg);
    }
    em.filler(slot_filler.back());
    while (!pending.empty()) {
      emit_reload(static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pending.size()) - 1)));
    }

    const std::vector<RegisterId> frame_out = low_registers(rng, m);
    em.instr(mnemonic("pop", rng) + separator(rng) + render_list(sorted(frame_out), rng));
    for (int i = 0; i < k; ++i) {
      em.instr(mnemonic("mov", rng) + separator(rng) + spell(freed[static_cast<std::size_t>(i)].index(), rng) +
               comma(rng) + spell(frame_out[static_cast<std::size_t>(i)].index(), rng));
    }
  }

  em.filler(filler_tail_total);
  em.instr(mnemonic("pop", rng) + separator(rng) + render_list(epilogue, rng));
  em.raw("\t.size\t" + name + ", .-" + name);

  GroundTruth truth;
  truth.spill_count = stores + reloads;
  truth.overhead_count = 2L * k + (nested ? 2L * m : 0L);
  truth.add_reg_peak = static_cast<long>(k) + peak_held;
  truth.add_reg_end = held;
  truth.instruction_count = em.instructions;
  return SynthFunction{std::move(name), em.out.str(), truth};
}

SynthSpec random_spec(std::mt19937_64& rng) {
  SynthSpec spec;
  spec.seed = rng();
  spec.n_prologue_frees = uniform(rng, 0, 5);
  spec.filler_instructions = uniform(rng, 0, 12);
  const int events = uniform(rng, 0, 8);
  std::set<int> never_reloaded;
  for (int i = 0; i < events; ++i) {
    std::vector<int> candidates;
    for (int r = 8; r <= 12; ++r) {
      if (!never_reloaded.contains(r)) candidates.push_back(r);
    }
    if (candidates.empty()) break;
    const int reg = pick(rng, candidates);
    const bool reload = chance(rng, 0.75);
    if (!reload) never_reloaded.insert(reg);
    spec.spill_events.push_back({RegisterId{reg}, reload});
  }
  return spec;
}

std::string render_instruction(const Instruction& instr, std::mt19937_64& rng) {
  std::string text;
  switch (instr.kind) {
    case InstrKind::Push:
      text = mnemonic("push", rng) + separator(rng) + render_list(instr.regs, rng);
      break;
    case InstrKind::Pop:
      text = mnemonic("pop", rng) + separator(rng) + render_list(instr.regs, rng);
      break;
    case InstrKind::RegMove:
      text = mnemonic(chance(rng, 0.2) ? "mov.n" : "mov", rng) + separator(rng) +
             spell(instr.dst().index(), rng) + comma(rng) + spell(instr.src().index(), rng);
      break;
    case InstrKind::OtherExecutable:
      text = filler_line(rng, false);
      break;
  }
  return (chance(rng, 0.5) ? "\t" : "  ") + text + trailing_comment(rng);
}

Instruction random_instruction(std::mt19937_64& rng) {
  Instruction instr;
  switch (uniform(rng, 0, 5)) {
    case 0:
    case 1: {
      instr.kind = chance(rng, 0.5) ? InstrKind::Push : InstrKind::Pop;
      for (int r = 0; r < kRegisterCount; ++r) {
        if (chance(rng, 0.25)) instr.regs.emplace_back(r);
      }
      if (instr.regs.empty()) instr.regs.emplace_back(uniform(rng, 0, 15));
      break;
    }
    case 2:
    case 3:
    case 4: {
      instr.kind = InstrKind::RegMove;
      // Bias towards special registers so that every branch is exercised.
      auto reg = [&] { return chance(rng, 0.5) ? uniform(rng, 8, 12) : uniform(rng, 0, 15); };
      instr.regs = {RegisterId{reg()}, RegisterId{reg()}};
      break;
    }
    default:
      instr.kind = InstrKind::OtherExecutable;
      break;
  }
  return instr;
}

std::vector<SynthSpec> parse_seed_corpus(std::string_view text) {
  std::vector<SynthSpec> specs;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;
    const std::string where = "seed corpus line " + std::to_string(line_no);
    if (kind == "random") {
      std::uint64_t master = 0;
      int count = 0;
      if (!(fields >> master >> count) || count < 0) throw InvalidSpec(where + ": bad random entry");
      Rng rng(master);
      for (int i = 0; i < count; ++i) specs.push_back(random_spec(rng));
    } else if (kind == "spec") {
      SynthSpec spec;
      std::string events;
      if (!(fields >> spec.seed >> spec.n_prologue_frees >> spec.filler_instructions >> events)) {
        throw InvalidSpec(where + ": bad spec entry");
      }
      if (events != "-") {
        std::istringstream items(events);
        std::string item;
        while (std::getline(items, item, ',')) {
          if (item.size() < 2 || (item.back() != '+' && item.back() != '-')) {
            throw InvalidSpec(where + ": bad event '" + item + "'");
          }
          auto reg = RegisterNames{}.lookup(item.substr(0, item.size() - 1));
          if (!reg) throw InvalidSpec(where + ": bad register in '" + item + "'");
          spec.spill_events.push_back({*reg, item.back() == '+'});
        }
      }
      validate(spec);
      specs.push_back(std::move(spec));
    } else {
      throw InvalidSpec(where + ": unknown entry '" + kind + "'");
    }
  }
  return specs;
}

std::vector<SynthSpec> load_seed_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read seed corpus '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_seed_corpus(buffer.str());
}

}  // namespace spillscope::testkit
