// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "socbist/fixed.hpp"

namespace socbist {

using CoreId = std::uint32_t;

// Per-core test parameters. Remaining times are what is left of each test
// part; speeds follow from clock frequency and cycles per applied pattern.
struct CoreSpec {
  CoreId id = 0;
  Power p_m;
  Micros t_vd;  // remaining external (deterministic) test time
  Micros t_vp;  // remaining BIST (pseudo-random) test time
  Frequency f_b;
  std::uint64_t ac_b = 1;
  Frequency f_e;
  std::uint64_t ac_e = 1;
  std::uint64_t pis = 0;
  std::uint64_t ppis = 0;

  friend bool operator==(const CoreSpec&, const CoreSpec&) = default;
};

struct SocSpec {
  std::string name = "soc";
  std::vector<CoreSpec> cores;  // ordered by id, ids 1..n
  Power p_max;
  std::uint32_t tam_width = 0;
  Frequency ate_freq = Frequency::from_mhz(100);

  const CoreSpec& core(CoreId id) const;
  friend bool operator==(const SocSpec&, const SocSpec&) = default;
};

// Pattern budget of one core. Phase-1 DTPs, PRTPs and phase-2 DTPs target
// disjoint fault sets.
struct TestSet {
  CoreId core_id = 0;
  std::uint64_t n_dtp_phase1 = 0;
  std::uint64_t n_prtp = 0;
  std::uint64_t n_dtp_phase2 = 0;

  std::uint64_t n_dtp() const { return n_dtp_phase1 + n_dtp_phase2; }
  friend bool operator==(const TestSet&, const TestSet&) = default;
};

// Throws Error(InvalidArgument) when a field breaks the core invariants.
void validate(const CoreSpec& core);
// Core invariants, unique contiguous ids, p_max > 0, and every p_m <= p_max
// (InfeasibleCore otherwise). Throws EmptySoc for a SoC without cores.
void validate(const SocSpec& soc);

// Patterns per second.
double bist_speed(const CoreSpec& core);
double external_speed(const CoreSpec& core);

// Scan-model test cycles: pmdv * (pis + ppis) + opt_prtp. Throws
// Error(Overflow) instead of wrapping.
std::uint64_t test_cycles(std::uint64_t pmdv, std::uint64_t pis, std::uint64_t ppis,
                          std::uint64_t opt_prtp);

// cycles / f, rounded half-up to 0.01 us.
Micros cycles_to_time(std::uint64_t cycles, Frequency f);
Micros prtp_time(const CoreSpec& core, std::uint64_t n_prtp);
Micros dtp_time(const CoreSpec& core, std::uint64_t n_dtp);
Micros test_time(const TestSet& ts, const CoreSpec& core);

}  // namespace socbist
