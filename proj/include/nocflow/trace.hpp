#pragma once
// Textual IR trace model: grammar parsing, instruction energy groups, and the
// three dependency tables (source / destination / dependency) that drive graph
// construction downstream.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nocflow {

enum class Opcode {
  Load, Store, Add, Sub, Mul,
  FAdd, FSub, FMul,
  SDiv, UDiv, FDiv, SRem, URem, FRem,
  ICmp, FCmp, Br, Ret, Alloca,
};

// M = memory, B = program flow, D = division, G = everything else.
enum class Group { M, B, D, G };

enum class ValueType { I1, I32, I64, F32, F64, Ptr };

inline int data_size_bytes(ValueType t) {
  switch (t) {
    case ValueType::I1: return 1;
    case ValueType::I32: return 4;
    case ValueType::F32: return 4;
    case ValueType::I64: return 8;
    case ValueType::F64: return 8;
    case ValueType::Ptr: return 8;
  }
  return 0;
}

inline const char* value_type_name(ValueType t) {
  switch (t) {
    case ValueType::I1: return "i1";
    case ValueType::I32: return "i32";
    case ValueType::I64: return "i64";
    case ValueType::F32: return "float";
    case ValueType::F64: return "double";
    case ValueType::Ptr: return "ptr";
  }
  return "?";
}

inline Group classify(Opcode op) {
  switch (op) {
    case Opcode::Load:
    case Opcode::Store:
    case Opcode::Alloca: return Group::M;
    case Opcode::Br:
    case Opcode::Ret: return Group::B;
    case Opcode::SDiv:
    case Opcode::UDiv:
    case Opcode::FDiv:
    case Opcode::SRem:
    case Opcode::URem:
    case Opcode::FRem: return Group::D;
    default: return Group::G;
  }
}

inline const char* group_name(Group g) {
  switch (g) {
    case Group::M: return "M";
    case Group::B: return "B";
    case Group::D: return "D";
    case Group::G: return "G";
  }
  return "?";
}

inline const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::Load: return "load";
    case Opcode::Store: return "store";
    case Opcode::Add: return "add";
    case Opcode::Sub: return "sub";
    case Opcode::Mul: return "mul";
    case Opcode::FAdd: return "fadd";
    case Opcode::FSub: return "fsub";
    case Opcode::FMul: return "fmul";
    case Opcode::SDiv: return "sdiv";
    case Opcode::UDiv: return "udiv";
    case Opcode::FDiv: return "fdiv";
    case Opcode::SRem: return "srem";
    case Opcode::URem: return "urem";
    case Opcode::FRem: return "frem";
    case Opcode::ICmp: return "icmp";
    case Opcode::FCmp: return "fcmp";
    case Opcode::Br: return "br";
    case Opcode::Ret: return "ret";
    case Opcode::Alloca: return "alloca";
  }
  return "?";
}

struct LatencyDefaults {
  int load = 2;
  int store = 2;
  int div_group = 10;
  int other = 1;

  int for_opcode(Opcode op) const {
    if (op == Opcode::Load) return load;
    if (op == Opcode::Store) return store;
    if (classify(op) == Group::D) return div_group;
    return other;
  }
};

struct Instruction {
  int line_no = 0;                       // 1-based position in the trace
  Opcode opcode = Opcode::Add;
  std::optional<std::string> result_reg; // absent for store/br/ret
  std::optional<std::string> dest_ptr;   // store only: the written pointer
  std::vector<std::string> source_regs;  // register operands, textual order
  ValueType value_type = ValueType::F64; // type of the produced/stored value
  int data_size = 8;                     // bytes, from value_type
  int latency = 1;                       // cycles
};

struct TraceProgram {
  std::vector<Instruction> instructions;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(int line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::optional<Opcode> opcode_from(std::string_view s) {
  static const std::map<std::string_view, Opcode> table = {
      {"load", Opcode::Load},   {"store", Opcode::Store},
      {"add", Opcode::Add},     {"sub", Opcode::Sub},
      {"mul", Opcode::Mul},     {"fadd", Opcode::FAdd},
      {"fsub", Opcode::FSub},   {"fmul", Opcode::FMul},
      {"sdiv", Opcode::SDiv},   {"udiv", Opcode::UDiv},
      {"fdiv", Opcode::FDiv},   {"srem", Opcode::SRem},
      {"urem", Opcode::URem},   {"frem", Opcode::FRem},
      {"icmp", Opcode::ICmp},   {"fcmp", Opcode::FCmp},
      {"br", Opcode::Br},       {"ret", Opcode::Ret},
      {"alloca", Opcode::Alloca},
  };
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

inline std::optional<ValueType> value_type_from(std::string_view s) {
  // A trailing '*' marks a pointer-to-type token ("double*"); the operand it
  // types is an address, but the token still parses as a type.
  bool pointer = !s.empty() && s.back() == '*';
  if (pointer) s.remove_suffix(1);
  if (s == "i1") return pointer ? ValueType::Ptr : ValueType::I1;
  if (s == "i32") return pointer ? ValueType::Ptr : ValueType::I32;
  if (s == "i64") return pointer ? ValueType::Ptr : ValueType::I64;
  if (s == "float") return pointer ? ValueType::Ptr : ValueType::F32;
  if (s == "double") return pointer ? ValueType::Ptr : ValueType::F64;
  if (s == "ptr") return ValueType::Ptr;
  return std::nullopt;
}

inline bool is_register(std::string_view s) {
  if (s.size() < 2 || s[0] != '%') return false;
  for (char c : s.substr(1))
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

inline bool is_numeric_literal(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i >= s.size()) return false;
  bool digit = false, dot = false, exp = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c == '.' && !dot && !exp) {
      dot = true;
    } else if ((c == 'e' || c == 'E') && digit && !exp) {
      exp = true;
      if (i + 1 < s.size() && (s[i + 1] == '-' || s[i + 1] == '+')) ++i;
    } else {
      return false;
    }
  }
  return digit;
}

inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Splits off a trailing "; cycles=N" annotation; any other ';' starts a comment.
inline std::pair<std::string, std::optional<int>> strip_comment(
    std::string_view line) {
  auto pos = line.find(';');
  if (pos == std::string_view::npos) return {std::string(line), std::nullopt};
  std::string_view rest = line.substr(pos + 1);
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front())))
      v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
      v.remove_suffix(1);
    return v;
  };
  rest = trim(rest);
  constexpr std::string_view kPrefix = "cycles=";
  if (rest.size() > kPrefix.size() && rest.substr(0, kPrefix.size()) == kPrefix) {
    std::string_view num = rest.substr(kPrefix.size());
    bool all_digits = !num.empty();
    for (char c : num)
      if (!std::isdigit(static_cast<unsigned char>(c))) all_digits = false;
    if (all_digits)
      return {std::string(line.substr(0, pos)), std::stoi(std::string(num))};
  }
  return {std::string(line.substr(0, pos)), std::nullopt};
}

}  // namespace detail

// Parses the textual trace grammar. One instruction per line; ';' comments;
// optional "; cycles=N" latency annotation; registers are '%' + alphanumerics;
// numeric literals are valid operands and contribute no dependencies.
inline TraceProgram parse_trace(std::string_view text,
                                const LatencyDefaults& lat = {}) {
  TraceProgram prog;
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string_view raw = text.substr(
        start, end == std::string_view::npos ? text.size() - start : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;

    auto [body, cycles] = detail::strip_comment(raw);
    auto tokens = detail::tokenize(body);
    if (tokens.empty()) continue;
    ++line_no;

    Instruction ins;
    ins.line_no = line_no;

    auto expect_reg = [&](const std::string& t) -> std::string {
      if (!detail::is_register(t))
        throw TraceError(line_no, "malformed register token '" + t + "'");
      return t;
    };
    auto add_operand = [&](const std::string& t) {
      if (detail::is_register(t)) {
        ins.source_regs.push_back(t);
      } else if (!detail::is_numeric_literal(t)) {
        throw TraceError(line_no, "malformed register token '" + t + "'");
      }
    };
    // Consumes a trailing "align N" if present; anything else is an error.
    auto finish_align = [&](size_t i) {
      if (i >= tokens.size()) return;
      if (tokens[i] == "align" && i + 1 < tokens.size() &&
          detail::is_numeric_literal(tokens[i + 1]) && i + 2 == tokens.size())
        return;
      throw TraceError(line_no, "unexpected token '" + tokens[i] + "'");
    };

    if (tokens[0] == "store") {
      // store <ty> <val>, <ty>* <ptr> [, align N]
      if (tokens.size() < 4) throw TraceError(line_no, "malformed store");
      ins.opcode = Opcode::Store;
      auto ty = detail::value_type_from(tokens[1]);
      if (!ty) throw TraceError(line_no, "unknown type '" + tokens[1] + "'");
      ins.value_type = *ty;
      add_operand(tokens[2]);
      if (!detail::value_type_from(tokens[3]))
        throw TraceError(line_no, "unknown type '" + tokens[3] + "'");
      if (tokens.size() < 5) throw TraceError(line_no, "malformed store");
      ins.dest_ptr = expect_reg(tokens[4]);
      finish_align(5);
    } else if (tokens[0] == "br") {
      // br label <l>  |  br i1 <c>, label <l1>, label <l2>
      ins.opcode = Opcode::Br;
      ins.value_type = ValueType::I1;
      if (tokens.size() == 3 && tokens[1] == "label") {
        // Unconditional: the label is a block name, not a data operand.
      } else if (tokens.size() == 7 && tokens[1] == "i1" &&
                 tokens[3] == "label" && tokens[5] == "label") {
        add_operand(tokens[2]);
      } else {
        throw TraceError(line_no, "malformed branch");
      }
    } else if (tokens[0] == "ret") {
      ins.opcode = Opcode::Ret;
      if (tokens.size() == 2 && tokens[1] == "void") {
        ins.value_type = ValueType::I1;
      } else if (tokens.size() == 3) {
        auto ty = detail::value_type_from(tokens[1]);
        if (!ty) throw TraceError(line_no, "unknown type '" + tokens[1] + "'");
        ins.value_type = *ty;
        add_operand(tokens[2]);
      } else {
        throw TraceError(line_no, "malformed ret");
      }
    } else if (detail::is_register(tokens[0])) {
      // <reg> = <opcode> [flags] <ty> <operands>
      if (tokens.size() < 3 || tokens[1] != "=")
        throw TraceError(line_no, "expected '=' after result register");
      ins.result_reg = expect_reg(tokens[0]);
      auto op = detail::opcode_from(tokens[2]);
      if (!op) throw TraceError(line_no, "unknown opcode '" + tokens[2] + "'");
      ins.opcode = *op;
      if (ins.opcode == Opcode::Store || ins.opcode == Opcode::Br ||
          ins.opcode == Opcode::Ret)
        throw TraceError(line_no,
                         std::string(opcode_name(ins.opcode)) +
                             " cannot produce a result");
      size_t i = 3;
      // Skip instruction flags (nsw, oeq, olt, ...) until a type token.
      std::optional<ValueType> ty;
      while (i < tokens.size() && !(ty = detail::value_type_from(tokens[i])))
        ++i;
      if (!ty) throw TraceError(line_no, "missing type");
      ++i;
      if (ins.opcode == Opcode::Load) {
        // %r = load <ty>, <ty>* <ptr> [, align N]
        ins.value_type = *ty;
        if (i >= tokens.size() || !detail::value_type_from(tokens[i]))
          throw TraceError(line_no, "malformed load");
        ++i;
        if (i >= tokens.size()) throw TraceError(line_no, "malformed load");
        ins.source_regs.push_back(expect_reg(tokens[i]));
        finish_align(i + 1);
      } else if (ins.opcode == Opcode::Alloca) {
        // %r = alloca <ty> [, align N] — produces a pointer.
        ins.value_type = ValueType::Ptr;
        finish_align(i);
      } else {
        // Binary arithmetic / comparison: <ty> <op1>, <op2>
        if (i + 2 != tokens.size())
          throw TraceError(line_no, "expected two operands");
        add_operand(tokens[i]);
        add_operand(tokens[i + 1]);
        bool cmp = ins.opcode == Opcode::ICmp || ins.opcode == Opcode::FCmp;
        ins.value_type = cmp ? ValueType::I1 : *ty;
      }
    } else {
      if (detail::opcode_from(tokens[0]))
        throw TraceError(line_no, "malformed instruction");
      throw TraceError(line_no, "unknown opcode '" + tokens[0] + "'");
    }

    ins.data_size = data_size_bytes(ins.value_type);
    ins.latency = cycles ? *cycles : lat.for_opcode(ins.opcode);
    if (ins.latency < 0) throw TraceError(line_no, "negative latency");
    prog.instructions.push_back(std::move(ins));
  }
  return prog;
}

struct DepEntry {
  int producer_line;  // line that wrote the matched register
  int latency;        // producer's latency, cycles
  int data_size;      // producer's data size, bytes

  bool operator==(const DepEntry&) const = default;
};

struct DependencyTables {
  std::map<std::string, std::vector<int>> src_table;  // register -> reader lines
  std::map<std::string, int> dest_table;              // register -> last writer
  std::map<int, std::vector<DepEntry>> dep_table;     // consumer -> producers
};

// Replays the trace in order: sources recorded per read; the destination map
// keeps the most recent writer; a read of an earlier-written register appends
// a dependency entry under the consumer's line.
inline DependencyTables build_tables(const TraceProgram& prog) {
  DependencyTables t;
  std::map<std::string, int> last_writer;  // evolving view during the replay
  std::map<int, const Instruction*> by_line;
  for (const auto& ins : prog.instructions) by_line[ins.line_no] = &ins;

  for (const auto& ins : prog.instructions) {
    for (const auto& reg : ins.source_regs) {
      t.src_table[reg].push_back(ins.line_no);
      auto w = last_writer.find(reg);
      if (w != last_writer.end()) {
        const Instruction& prod = *by_line.at(w->second);
        t.dep_table[ins.line_no].push_back(
            {prod.line_no, prod.latency, prod.data_size});
      }
    }
    if (ins.result_reg) last_writer[*ins.result_reg] = ins.line_no;
    if (ins.dest_ptr) last_writer[*ins.dest_ptr] = ins.line_no;
  }
  for (const auto& [reg, line] : last_writer) t.dest_table[reg] = line;
  return t;
}

struct EnergyTable {
  double m = 3e-12;  // shipped defaults are illustrative, not measured
  double b = 1e-12;
  double d = 5e-12;
  double g = 1e-12;

  double cost(Group gr) const {
    switch (gr) {
      case Group::M: return m;
      case Group::B: return b;
      case Group::D: return d;
      case Group::G: return g;
    }
    return 0.0;
  }
};

inline std::map<Group, std::int64_t> group_counts(const TraceProgram& prog) {
  std::map<Group, std::int64_t> counts = {
      {Group::M, 0}, {Group::B, 0}, {Group::D, 0}, {Group::G, 0}};
  for (const auto& ins : prog.instructions) ++counts[classify(ins.opcode)];
  return counts;
}

// Total energy of a sequentially executed instruction mix: sum of per-group
// instruction cost times count.
inline double node_energy(const std::map<Group, std::int64_t>& counts,
                          const EnergyTable& table) {
  double e = 0.0;
  for (const auto& [g, n] : counts) e += table.cost(g) * static_cast<double>(n);
  return e;
}

}  // namespace nocflow
