// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "socbist/atpg.hpp"
#include "socbist/error.hpp"
#include "socbist/fault_sim.hpp"
#include "socbist/lfsr.hpp"
#include "socbist/netlist.hpp"
#include "socbist/soc_io.hpp"
#include "test_support.hpp"

using namespace socbist;

namespace {

const char* kAnd = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n";

Netlist c17() { return parse_bench(read_file(testsupport::fixture("c17.bench")), "c17"); }

std::set<std::string> detected_names(const Netlist& nl, const std::vector<Pattern>& pats) {
  const auto faults = fault_list(nl);
  const auto det = fault_simulate(nl, pats, faults);
  std::set<std::string> out;
  for (std::size_t i = 0; i < faults.size(); ++i)
    if (det[i]) out.insert(fault_name(nl, faults[i]));
  return out;
}

ErrorKind parse_error(const std::string& text, std::size_t* line = nullptr) {
  try {
    parse_bench(text);
  } catch (const Error& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  return ErrorKind::Stuck;
}

std::vector<Pattern> all_vectors(std::size_t width) {
  std::vector<Pattern> out;
  for (std::uint64_t v = 0; v < (1ull << width); ++v) {
    Pattern p(width);
    for (std::size_t j = 0; j < width; ++j) p[j] = (v >> j) & 1;
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("bench parsing") {
  Netlist nl = parse_bench(kAnd);
  CHECK(nl.num_pis == 2);
  CHECK(nl.num_ppis() == 0);
  CHECK(nl.num_pos == 1);
  CHECK(nl.gates.size() == 1);
  CHECK(nl.net_names == std::vector<std::string>{"a", "b", "y"});

  nl = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(q)\ny = AND(a, b)\nq = DFF(y)\n");
  CHECK(nl.num_pis == 2);
  CHECK(nl.num_ppis() == 1);
  CHECK(nl.num_pos == 1);
  CHECK(nl.num_ppos() == 1);

  nl = c17();
  CHECK(nl.num_pis == 5);
  CHECK(nl.num_pos == 2);
  CHECK(nl.gates.size() == 6);
  CHECK(nl.num_nets() == 11);
}

TEST_CASE("bench errors carry lines") {
  std::size_t line = 0;
  CHECK(parse_error("INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n", &line) == ErrorKind::UnknownGate);
  CHECK(line == 3);
  CHECK(parse_error("INPUT(a)\nOUTPUT(y)\ny = AND(a\n", &line) == ErrorKind::Syntax);
  CHECK(line == 3);
  CHECK(parse_error("INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\n") == ErrorKind::UndefinedNet);
  CHECK(parse_error("INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\nz = NOT(y)\n") ==
        ErrorKind::CombinationalLoop);
}

TEST_CASE("bench round trip") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Netlist a = testsupport::random_netlist(rng, {4 + rng() % 5, 5 + rng() % 20, 3});
    const Netlist b = parse_bench(write_bench(a), a.name);
    CHECK(write_bench(a) == write_bench(b));
    CHECK(a.net_names == b.net_names);
  }
  const Netlist dff = parse_bench(std::string(kAnd) + "OUTPUT(q)\nq = DFF(y)\n");
  CHECK(write_bench(parse_bench(write_bench(dff))) == write_bench(dff));
}

TEST_CASE("fault lists") {
  CHECK(fault_list(parse_bench(kAnd)).size() == 6);
  CHECK(fault_list(c17()).size() == 22);
  CHECK(fault_list(parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUFF(a)\n")).size() == 4);
  const Netlist nl = parse_bench(kAnd);
  CHECK(fault_name(nl, fault_list(nl)[0]) == "a/sa0");
}

TEST_CASE("fault simulation on one AND gate") {
  const Netlist nl = parse_bench(kAnd);
  CHECK(detected_names(nl, {{1, 1}}) == std::set<std::string>{"a/sa0", "b/sa0", "y/sa0"});
  CHECK(detected_names(nl, {{0, 0}}) == std::set<std::string>{"y/sa1"});
  CHECK(detected_names(nl, {}).empty());
  CHECK(simulate(nl, {1, 1}) == std::vector<std::uint8_t>{1});
  CHECK_THROWS_AS(fault_simulate(nl, std::vector<Pattern>{{1}}, fault_list(nl)), Error);
}

TEST_CASE("word-parallel simulation equals the scalar reference") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const Netlist nl = testsupport::random_netlist(rng, {3 + rng() % 8, 5 + rng() % 25, 4});
    std::vector<Pattern> pats(rng() % 200);
    for (auto& p : pats) {
      p.resize(nl.num_inputs());
      for (auto& b : p) b = rng() & 1;
    }
    const auto faults = fault_list(nl);
    CHECK(fault_simulate(nl, pats, faults) == fault_simulate_reference(nl, pats, faults));
    CHECK(first_detection(nl, pats, faults) == first_detection_reference(nl, pats, faults));
  }
}

TEST_CASE("detection is monotone in the pattern set") {
  std::mt19937_64 rng(3);
  const Netlist nl = testsupport::random_netlist(rng, {6, 20, 3});
  const auto faults = fault_list(nl);
  std::vector<Pattern> pats = lfsr_sequence(default_lfsr(6, 1), 40, 6);
  const auto small = fault_simulate(nl, std::span(pats).first(10), faults);
  const auto large = fault_simulate(nl, pats, faults);
  for (std::size_t i = 0; i < faults.size(); ++i)
    if (small[i]) CHECK(large[i]);
}

TEST_CASE("LFSR sequences") {
  Lfsr l3(3, 0b101, 0b001);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 7; ++i) seen.insert(l3.next());
  CHECK(seen.size() == 7);
  CHECK(l3.state() == 0b001);

  Lfsr l4(4, 0b1001, 0b1000);
  seen.clear();
  for (int i = 0; i < 15; ++i) seen.insert(l4.next());
  CHECK(seen.size() == 15);
  CHECK_FALSE(seen.count(0));

  CHECK(lfsr_sequence(l4, 0, 4).empty());
  CHECK(lfsr_sequence(l4, 10, 4) == lfsr_sequence(l4, 10, 4));
  const auto prefix = lfsr_sequence(l4, 5, 4);
  const auto longer = lfsr_sequence(l4, 12, 4);
  CHECK(std::equal(prefix.begin(), prefix.end(), longer.begin()));

  // narrower register tiles across wider vectors
  const auto tiled = lfsr_sequence(Lfsr(3, 0b101, 0b011), 1, 7);
  CHECK(tiled[0] == Pattern{1, 1, 0, 1, 1, 0, 1});

  for (unsigned w = 2; w <= 16; ++w) {
    Lfsr l = Lfsr::with_default_taps(w, 1);
    std::uint64_t period = 0;
    do {
      l.next();
      ++period;
    } while (l.state() != 1 && period <= (1ull << w));
    CHECK_MESSAGE(period == (1ull << w) - 1, "width " << w);
  }

  CHECK_THROWS_AS(Lfsr(4, 0b1001, 0), Error);
  CHECK_THROWS_AS(Lfsr(4, 0b0011, 1), Error);
  CHECK_THROWS_AS(default_taps(33), Error);
}

TEST_CASE("atpg") {
  const Netlist nl = parse_bench(kAnd);
  const auto faults = fault_list(nl);
  AtpgResult r = atpg(nl, faults);
  CHECK(r.patterns.size() <= 3);
  CHECK(r.undetected.empty());
  CHECK(detected_names(nl, r.patterns).size() == 6);

  r = atpg(nl, {});
  CHECK(r.patterns.empty());
  CHECK(r.undetected.empty());

  const Netlist c = c17();
  r = atpg(c, fault_list(c));
  CHECK(r.patterns.size() <= 10);
  CHECK(r.undetected.empty());
  CHECK(detected_names(c, r.patterns).size() == 22);
}

TEST_CASE("exhaustive atpg reports exactly the untestable faults") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Netlist nl = testsupport::random_netlist(rng, {2 + rng() % 8, 4 + rng() % 20, 3});
    const auto faults = fault_list(nl);
    const auto truth = fault_simulate_reference(nl, all_vectors(nl.num_inputs()), faults);
    const AtpgResult r = atpg(nl, faults);
    std::vector<Fault> untestable;
    for (std::size_t i = 0; i < faults.size(); ++i)
      if (!truth[i]) untestable.push_back(faults[i]);
    std::vector<Fault> reported = r.undetected;
    std::sort(reported.begin(), reported.end());
    std::sort(untestable.begin(), untestable.end());
    CHECK(reported == untestable);
    // every returned pattern detects some target
    for (const Pattern& p : r.patterns) {
      const auto det = fault_simulate(nl, std::vector<Pattern>{p}, faults);
      CHECK(std::find(det.begin(), det.end(), true) != det.end());
    }
  }
}

TEST_CASE("bounded atpg path") {
  std::mt19937_64 rng(23);
  const Netlist nl = testsupport::random_netlist(rng, {30, 40, 3});
  const auto faults = fault_list(nl);
  const AtpgResult r = atpg(nl, faults);
  const auto det = fault_simulate(nl, r.patterns, faults);
  std::size_t missed = 0;
  for (bool d : det) missed += !d;
  CHECK(missed == r.undetected.size());
  CHECK(r.patterns.size() < faults.size());
}
