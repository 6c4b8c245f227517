// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace socbist {

using NetId = std::uint32_t;

enum class GateKind { And, Nand, Or, Nor, Xor, Xnor, Not, Buff };

const char* to_string(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<NetId> inputs;
  NetId output;
};

// Combinational full-scan view of a circuit. Flip-flops are cut: each DFF
// output becomes a pseudo-primary input, each DFF data net a pseudo-primary
// output. Nets are numbered by first appearance in the source text.
struct Netlist {
  std::string name;
  std::vector<std::string> net_names;
  std::vector<NetId> inputs;  // PIs, then PPIs
  std::size_t num_pis = 0;
  std::vector<NetId> outputs;  // POs, then PPOs
  std::size_t num_pos = 0;
  std::vector<Gate> gates;  // topological order

  std::size_t num_nets() const { return net_names.size(); }
  std::size_t num_inputs() const { return inputs.size(); }
  std::size_t num_ppis() const { return inputs.size() - num_pis; }
  std::size_t num_ppos() const { return outputs.size() - num_pos; }
};

// ISCAS-85/89 .bench reader. Throws Error with a line number on syntax
// errors, UnknownGate, UndefinedNet, or CombinationalLoop.
Netlist parse_bench(std::string_view text, std::string name = {});

// Serializes back to .bench text (DFFs restored from the PPI/PPO pairs).
std::string write_bench(const Netlist& nl);

// Single stuck-at fault on a net.
struct Fault {
  NetId net = 0;
  std::uint8_t stuck_at = 0;  // 0 or 1

  friend auto operator<=>(const Fault&, const Fault&) = default;
};

// Uncollapsed fault universe: stuck-at-0 then stuck-at-1 on every net, in
// net order.
std::vector<Fault> fault_list(const Netlist& nl);

// "a/sa0"
std::string fault_name(const Netlist& nl, const Fault& f);

}  // namespace socbist
