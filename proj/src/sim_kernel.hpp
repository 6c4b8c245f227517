// SPDX-License-Identifier: Apache-2.0
// Word-parallel two-valued gate evaluation shared by fault simulation and
// ATPG. Bit k of every word is an independent pattern lane.
#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "socbist/netlist.hpp"

namespace socbist::detail {

using Word = std::uint64_t;

inline Word eval_gate(GateKind kind, std::span<const NetId> inputs, const Word* v) {
  Word acc = v[inputs[0]];
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
      for (std::size_t i = 1; i < inputs.size(); ++i) acc &= v[inputs[i]];
      return kind == GateKind::Nand ? ~acc : acc;
    case GateKind::Or:
    case GateKind::Nor:
      for (std::size_t i = 1; i < inputs.size(); ++i) acc |= v[inputs[i]];
      return kind == GateKind::Nor ? ~acc : acc;
    case GateKind::Xor:
    case GateKind::Xnor:
      for (std::size_t i = 1; i < inputs.size(); ++i) acc ^= v[inputs[i]];
      return kind == GateKind::Xnor ? ~acc : acc;
    case GateKind::Not:
      return ~acc;
    case GateKind::Buff:
      return acc;
  }
  return acc;
}

class WordSimulator {
 public:
  explicit WordSimulator(const Netlist& nl) : nl_(nl), first_reader_(nl.num_nets(), nl.gates.size()) {
    for (std::size_t g = nl.gates.size(); g-- > 0;)
      for (NetId in : nl.gates[g].inputs) first_reader_[in] = g;
  }

  const Netlist& netlist() const { return nl_; }

  // values must hold num_nets words; input words are indexed like nl.inputs.
  void eval_good(std::span<const Word> input_words, Word* values) const {
    for (std::size_t i = 0; i < nl_.inputs.size(); ++i) values[nl_.inputs[i]] = input_words[i];
    for (const Gate& g : nl_.gates) values[g.output] = eval_gate(g.kind, g.inputs, values);
  }

  // Lanes (within `mask`) where the fault changes some output. `faulty` is
  // scratch of num_nets words.
  Word detect(const Fault& f, const Word* good, Word* faulty, Word mask) const {
    const Word stuck = f.stuck_at ? ~Word{0} : Word{0};
    if (((good[f.net] ^ stuck) & mask) == 0) return 0;
    propagate(f, good, faulty);
    Word diff = 0;
    for (NetId o : nl_.outputs) diff |= good[o] ^ faulty[o];
    return diff & mask;
  }

  // Fills `faulty` with the faulty-circuit values.
  void propagate(const Fault& f, const Word* good, Word* faulty) const {
    const std::size_t n = nl_.num_nets();
    std::copy(good, good + n, faulty);
    faulty[f.net] = f.stuck_at ? ~Word{0} : Word{0};
    for (std::size_t g = first_reader_[f.net]; g < nl_.gates.size(); ++g) {
      const Gate& gate = nl_.gates[g];
      if (gate.output == f.net) continue;
      faulty[gate.output] = eval_gate(gate.kind, gate.inputs, faulty);
    }
  }

 private:
  const Netlist& nl_;
  std::vector<std::size_t> first_reader_;
};

inline Word lane_mask(std::size_t lanes) {
  return lanes >= 64 ? ~Word{0} : ((Word{1} << lanes) - 1);
}

}  // namespace socbist::detail
