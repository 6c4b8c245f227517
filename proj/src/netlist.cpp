// SPDX-License-Identifier: Apache-2.0
#include "socbist/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <queue>
#include <unordered_map>

#include "socbist/error.hpp"

namespace socbist {

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buff: return "BUFF";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_net_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
        c == '=')
      return false;
  }
  return true;
}

std::optional<GateKind> gate_kind(std::string upper) {
  static const std::map<std::string, GateKind> kinds = {
      {"AND", GateKind::And},   {"NAND", GateKind::Nand}, {"OR", GateKind::Or},
      {"NOR", GateKind::Nor},   {"XOR", GateKind::Xor},   {"XNOR", GateKind::Xnor},
      {"NOT", GateKind::Not},   {"INV", GateKind::Not},   {"BUFF", GateKind::Buff},
      {"BUF", GateKind::Buff},
  };
  auto it = kinds.find(upper);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

struct RawGate {
  std::string kind;  // upper case
  std::vector<NetId> inputs;
  NetId output;
  std::size_t line;
};

class BenchParser {
 public:
  explicit BenchParser(std::string name) { nl_.name = std::move(name); }

  Netlist parse(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto eol = text.find('\n');
      std::string_view line = text.substr(0, eol);
      text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (!line.empty()) parse_line(line, line_no);
    }
    return finish();
  }

 private:
  NetId net(std::string_view name, std::size_t line) {
    if (!valid_net_name(name))
      throw Error(ErrorKind::Syntax, "invalid net name '" + std::string(name) + "'", line);
    auto [it, inserted] =
        ids_.try_emplace(std::string(name), static_cast<NetId>(nl_.net_names.size()));
    if (inserted) {
      nl_.net_names.emplace_back(name);
      driver_line_.push_back(0);
    }
    return it->second;
  }

  void define(NetId id, std::size_t line) {
    if (driver_line_[id] != 0)
      throw Error(ErrorKind::Syntax,
                  "net '" + nl_.net_names[id] + "' already driven at line " +
                      std::to_string(driver_line_[id]),
                  line);
    driver_line_[id] = line;
  }

  // Splits "KW(args)" into keyword and argument text.
  static std::pair<std::string_view, std::string_view> call(std::string_view s, std::size_t line) {
    const auto open = s.find('(');
    if (open == std::string_view::npos || s.back() != ')')
      throw Error(ErrorKind::Syntax, "expected NAME(...)", line);
    return {trim(s.substr(0, open)), s.substr(open + 1, s.size() - open - 2)};
  }

  std::vector<NetId> arguments(std::string_view args, std::size_t line) {
    std::vector<NetId> out;
    while (true) {
      const auto comma = args.find(',');
      out.push_back(net(trim(args.substr(0, comma)), line));
      if (comma == std::string_view::npos) break;
      args = args.substr(comma + 1);
    }
    return out;
  }

  static std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
  }

  void parse_line(std::string_view line, std::size_t line_no) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      auto [kw, args] = call(line, line_no);
      const std::string k = upper(kw);
      const NetId id = net(trim(args), line_no);
      if (k == "INPUT") {
        define(id, line_no);
        nl_.inputs.push_back(id);
      } else if (k == "OUTPUT") {
        output_lines_.emplace_back(id, line_no);
        nl_.outputs.push_back(id);
      } else {
        throw Error(ErrorKind::Syntax, "expected INPUT, OUTPUT or an assignment", line_no);
      }
      return;
    }
    const NetId out = net(trim(line.substr(0, eq)), line_no);
    auto [kw, args] = call(trim(line.substr(eq + 1)), line_no);
    RawGate g{upper(kw), arguments(args, line_no), out, line_no};
    define(out, line_no);
    if (g.kind == "DFF") {
      if (g.inputs.size() != 1) throw Error(ErrorKind::Syntax, "DFF takes one input", line_no);
      dffs_.push_back(std::move(g));
      return;
    }
    auto kind = gate_kind(g.kind);
    if (!kind) throw Error(ErrorKind::UnknownGate, "unknown gate type '" + g.kind + "'", line_no);
    if ((*kind == GateKind::Not || *kind == GateKind::Buff) && g.inputs.size() != 1)
      throw Error(ErrorKind::Syntax, g.kind + " takes exactly one input", line_no);
    raw_.push_back(std::move(g));
  }

  Netlist finish() {
    nl_.num_pis = nl_.inputs.size();
    nl_.num_pos = nl_.outputs.size();
    for (const RawGate& d : dffs_) {
      nl_.inputs.push_back(d.output);
      nl_.outputs.push_back(d.inputs.front());
    }
    for (const auto& [id, line] : output_lines_)
      if (driver_line_[id] == 0)
        throw Error(ErrorKind::UndefinedNet, "output '" + nl_.net_names[id] + "' is never driven",
                    line);
    for (const RawGate& g : raw_)
      for (NetId in : g.inputs)
        if (driver_line_[in] == 0)
          throw Error(ErrorKind::UndefinedNet, "net '" + nl_.net_names[in] + "' is never driven",
                      g.line);
    for (const RawGate& d : dffs_)
      if (driver_line_[d.inputs.front()] == 0)
        throw Error(ErrorKind::UndefinedNet,
                    "net '" + nl_.net_names[d.inputs.front()] + "' is never driven", d.line);
    sort_gates();
    return std::move(nl_);
  }

  // Kahn's algorithm; ties resolve in source order.
  void sort_gates() {
    const std::size_t n = raw_.size();
    std::vector<std::size_t> producer(nl_.num_nets(), n);
    for (std::size_t i = 0; i < n; ++i) producer[raw_[i].output] = i;
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> readers(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (NetId in : raw_[i].inputs) {
        if (producer[in] != n) {
          ++pending[i];
          readers[producer[in]].push_back(i);
        }
      }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (pending[i] == 0) ready.push(i);
    nl_.gates.reserve(n);
    while (!ready.empty()) {
      const std::size_t i = ready.top();
      ready.pop();
      nl_.gates.push_back(Gate{*gate_kind(raw_[i].kind), raw_[i].inputs, raw_[i].output});
      for (std::size_t r : readers[i])
        if (--pending[r] == 0) ready.push(r);
    }
    if (nl_.gates.size() != n) {
      for (std::size_t i = 0; i < n; ++i)
        if (pending[i] != 0)
          throw Error(ErrorKind::CombinationalLoop,
                      "gate driving '" + nl_.net_names[raw_[i].output] + "' is on a cycle",
                      raw_[i].line);
    }
  }

  Netlist nl_;
  std::unordered_map<std::string, NetId> ids_;
  std::vector<std::size_t> driver_line_;
  std::vector<std::pair<NetId, std::size_t>> output_lines_;
  std::vector<RawGate> raw_;
  std::vector<RawGate> dffs_;
};

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
  return BenchParser(std::move(name)).parse(text);
}

std::string write_bench(const Netlist& nl) {
  std::string out;
  if (!nl.name.empty()) out += "# " + nl.name + "\n";
  for (std::size_t i = 0; i < nl.num_pis; ++i) out += "INPUT(" + nl.net_names[nl.inputs[i]] + ")\n";
  for (std::size_t i = 0; i < nl.num_pos; ++i)
    out += "OUTPUT(" + nl.net_names[nl.outputs[i]] + ")\n";
  for (std::size_t i = 0; i < nl.num_ppis(); ++i)
    out += nl.net_names[nl.inputs[nl.num_pis + i]] + " = DFF(" +
           nl.net_names[nl.outputs[nl.num_pos + i]] + ")\n";
  for (const Gate& g : nl.gates) {
    out += nl.net_names[g.output] + " = " + to_string(g.kind) + "(";
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
      if (i) out += ", ";
      out += nl.net_names[g.inputs[i]];
    }
    out += ")\n";
  }
  return out;
}

std::vector<Fault> fault_list(const Netlist& nl) {
  std::vector<Fault> faults;
  faults.reserve(2 * nl.num_nets());
  for (NetId n = 0; n < nl.num_nets(); ++n) {
    faults.push_back({n, 0});
    faults.push_back({n, 1});
  }
  return faults;
}

std::string fault_name(const Netlist& nl, const Fault& f) {
  return nl.net_names.at(f.net) + (f.stuck_at ? "/sa1" : "/sa0");
}

}  // namespace socbist
