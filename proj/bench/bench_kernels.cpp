// SPDX-License-Identifier: Apache-2.0
// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>

#include "socbist/fault_sim.hpp"
#include "socbist/lfsr.hpp"
#include "socbist/power_groups.hpp"
#include "test_support.hpp"

using namespace socbist;

namespace {

struct SimCase {
  Netlist nl;
  std::vector<Pattern> patterns;
  std::vector<Fault> faults;
};

const SimCase& sim_case() {
  static const SimCase c = [] {
    std::mt19937_64 rng(12);
    SimCase s{testsupport::random_netlist(rng, {24, 400, 3}), {}, {}};
    s.patterns = lfsr_sequence(default_lfsr(24, 1), 512, 24);
    s.faults = fault_list(s.nl);
    return s;
  }();
  return c;
}

const SocSpec& soc_case() {
  static const SocSpec soc = [] {
    std::mt19937_64 rng(3);
    SocSpec s = testsupport::random_soc(rng, 22);
    std::int64_t total = 0;
    for (const auto& core : s.cores) total += core.p_m.raw();
    s.p_max = Power::from_raw(total / 3);
    return s;
  }();
  return soc;
}

void BM_FaultSimWordParallel(benchmark::State& st) {
  const SimCase& c = sim_case();
  for (auto _ : st) benchmark::DoNotOptimize(fault_simulate(c.nl, c.patterns, c.faults));
}

void BM_FaultSimScalarReference(benchmark::State& st) {
  const SimCase& c = sim_case();
  for (auto _ : st) benchmark::DoNotOptimize(fault_simulate_reference(c.nl, c.patterns, c.faults));
}

void BM_EnumerateGroupsParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_groups(soc_case()));
}

void BM_EnumerateGroupsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_groups_serial(soc_case()));
}

}  // namespace

BENCHMARK(BM_FaultSimWordParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FaultSimScalarReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateGroupsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateGroupsSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
