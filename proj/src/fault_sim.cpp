// SPDX-License-Identifier: Apache-2.0
#include "socbist/fault_sim.hpp"

#include <algorithm>
#include <bit>

#include "sim_kernel.hpp"
#include "socbist/error.hpp"

namespace socbist {

using detail::Word;

namespace {

void check_widths(const Netlist& nl, std::span<const Pattern> patterns) {
  for (std::size_t i = 0; i < patterns.size(); ++i)
    if (patterns[i].size() != nl.num_inputs())
      throw Error(ErrorKind::VectorWidthMismatch,
                  "pattern " + std::to_string(i) + " has " + std::to_string(patterns[i].size()) +
                      " bits, circuit has " + std::to_string(nl.num_inputs()) + " inputs");
}

bool eval_scalar(GateKind kind, const std::vector<NetId>& inputs, const std::vector<std::uint8_t>& v) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      bool r = std::all_of(inputs.begin(), inputs.end(), [&](NetId n) { return v[n] != 0; });
      return kind == GateKind::And ? r : !r;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      bool r = std::any_of(inputs.begin(), inputs.end(), [&](NetId n) { return v[n] != 0; });
      return kind == GateKind::Or ? r : !r;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      bool r = false;
      for (NetId n : inputs) r = r != (v[n] != 0);
      return kind == GateKind::Xor ? r : !r;
    }
    case GateKind::Not:
      return v[inputs[0]] == 0;
    case GateKind::Buff:
      return v[inputs[0]] != 0;
  }
  return false;
}

// Net values with an optional forced net.
std::vector<std::uint8_t> eval_all(const Netlist& nl, const Pattern& p, const Fault* fault) {
  std::vector<std::uint8_t> v(nl.num_nets(), 0);
  for (std::size_t i = 0; i < nl.inputs.size(); ++i) v[nl.inputs[i]] = p[i];
  if (fault) v[fault->net] = fault->stuck_at;
  for (const Gate& g : nl.gates) {
    if (fault && g.output == fault->net) continue;
    v[g.output] = eval_scalar(g.kind, g.inputs, v) ? 1 : 0;
  }
  return v;
}

// Good values for `batches` consecutive 64-pattern batches starting at
// pattern `first`, laid out batch-major.
void pack_inputs(std::span<const Pattern> patterns, std::size_t first, std::size_t lanes,
                 std::size_t width, Word* words) {
  std::fill(words, words + width, Word{0});
  for (std::size_t k = 0; k < lanes; ++k) {
    const Pattern& p = patterns[first + k];
    for (std::size_t i = 0; i < width; ++i)
      if (p[i]) words[i] |= Word{1} << k;
  }
}

}  // namespace

std::vector<std::uint8_t> simulate(const Netlist& nl, const Pattern& pattern) {
  check_widths(nl, std::span<const Pattern>(&pattern, 1));
  const auto v = eval_all(nl, pattern, nullptr);
  std::vector<std::uint8_t> out;
  out.reserve(nl.outputs.size());
  for (NetId o : nl.outputs) out.push_back(v[o]);
  return out;
}

std::vector<std::size_t> first_detection(const Netlist& nl, std::span<const Pattern> patterns,
                                         std::span<const Fault> faults) {
  check_widths(nl, patterns);
  std::vector<std::size_t> first(faults.size(), kNotDetected);
  if (patterns.empty() || faults.empty()) return first;

  const detail::WordSimulator sim(nl);
  const std::size_t nets = std::max<std::size_t>(nl.num_nets(), 1);
  const std::size_t width = nl.num_inputs();
  const std::size_t total_batches = (patterns.size() + 63) / 64;
  // Good-circuit values are held for a chunk of batches at a time.
  const std::size_t chunk = std::max<std::size_t>(1, (std::size_t{1} << 22) / nets);

  std::vector<Word> good;
  std::vector<std::size_t> live;
  for (std::size_t b0 = 0; b0 < total_batches; b0 += chunk) {
    const std::size_t batches = std::min(chunk, total_batches - b0);
    good.assign(batches * nets, 0);
    std::vector<Word> inputs(width);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t start = (b0 + b) * 64;
      pack_inputs(patterns, start, std::min<std::size_t>(64, patterns.size() - start), width,
                  inputs.data());
      sim.eval_good(inputs, good.data() + b * nets);
    }

    live.clear();
    for (std::size_t f = 0; f < faults.size(); ++f)
      if (first[f] == kNotDetected) live.push_back(f);
    if (live.empty()) break;

    const auto n_live = static_cast<std::ptrdiff_t>(live.size());
#pragma omp parallel
    {
      std::vector<Word> faulty(nets);
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t li = 0; li < n_live; ++li) {
        const std::size_t f = live[static_cast<std::size_t>(li)];
        for (std::size_t b = 0; b < batches; ++b) {
          const std::size_t start = (b0 + b) * 64;
          const Word mask = detail::lane_mask(patterns.size() - start);
          const Word hit = sim.detect(faults[f], good.data() + b * nets, faulty.data(), mask);
          if (hit) {
            first[f] = start + static_cast<std::size_t>(std::countr_zero(hit));
            break;
          }
        }
      }
    }
  }
  return first;
}

std::vector<bool> fault_simulate(const Netlist& nl, std::span<const Pattern> patterns,
                                 std::span<const Fault> faults) {
  const auto first = first_detection(nl, patterns, faults);
  std::vector<bool> detected(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) detected[i] = first[i] != kNotDetected;
  return detected;
}

std::vector<std::size_t> first_detection_reference(const Netlist& nl,
                                                   std::span<const Pattern> patterns,
                                                   std::span<const Fault> faults) {
  check_widths(nl, patterns);
  std::vector<std::size_t> first(faults.size(), kNotDetected);
  for (std::size_t f = 0; f < faults.size(); ++f) {
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      const auto good = eval_all(nl, patterns[p], nullptr);
      const auto bad = eval_all(nl, patterns[p], &faults[f]);
      bool differs = false;
      for (NetId o : nl.outputs) differs = differs || good[o] != bad[o];
      if (differs) {
        first[f] = p;
        break;
      }
    }
  }
  return first;
}

std::vector<bool> fault_simulate_reference(const Netlist& nl, std::span<const Pattern> patterns,
                                           std::span<const Fault> faults) {
  const auto first = first_detection_reference(nl, patterns, faults);
  std::vector<bool> detected(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) detected[i] = first[i] != kNotDetected;
  return detected;
}

}  // namespace socbist
