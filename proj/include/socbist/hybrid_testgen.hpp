// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "socbist/atpg.hpp"
#include "socbist/core_model.hpp"
#include "socbist/fault_sim.hpp"
#include "socbist/lfsr.hpp"
#include "socbist/netlist.hpp"

namespace socbist {

struct OracleAnswer {
  std::uint64_t n_dtp_phase1 = 0;
  std::uint64_t n_dtp_phase2 = 0;
  std::uint64_t residual_faults = 0;
};

// Maps a PRTP count to the deterministic patterns still needed. For a fixed
// seed, n_dtp_phase2 never increases with n_prtp.
class CoverageOracle {
 public:
  virtual ~CoverageOracle() = default;
  // Thread-safe. Throws OracleRangeExceeded outside the supported domain.
  virtual OracleAnswer query(std::uint64_t n_prtp) const = 0;
  virtual std::uint64_t seed() const = 0;
  // Largest PRTP count the oracle answers for.
  virtual std::uint64_t max_prtp() const = 0;
  // Largest queryable PRTP count in (after, up_to], if any.
  virtual std::optional<std::uint64_t> largest_point_in(std::uint64_t after,
                                                        std::uint64_t up_to) const = 0;
};

struct CurveRow {
  std::uint64_t n_prtp = 0;
  std::uint64_t n_dtp_phase1 = 0;
  std::uint64_t n_dtp_phase2 = 0;
  friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

// Tabulated oracle. Rows are exact points; there is no interpolation.
class CurveOracle final : public CoverageOracle {
 public:
  // Throws MonotonicityViolation (line = 1-based row index + 1 for the
  // header) if n_prtp is not strictly increasing or n_dtp_phase2 increases.
  explicit CurveOracle(std::vector<CurveRow> rows, std::uint64_t seed = 1);

  OracleAnswer query(std::uint64_t n_prtp) const override;
  std::uint64_t seed() const override { return seed_; }
  std::uint64_t max_prtp() const override;
  std::optional<std::uint64_t> largest_point_in(std::uint64_t after,
                                                std::uint64_t up_to) const override;

  const std::vector<CurveRow>& rows() const { return rows_; }
  // Row with the given n_prtp, if any.
  const CurveRow* find(std::uint64_t n_prtp) const;
  // Largest row with n_prtp in (after, up_to], if any.
  const CurveRow* last_row_in(std::uint64_t after, std::uint64_t up_to) const;

 private:
  std::vector<CurveRow> rows_;
  std::uint64_t seed_;
};

// Threshold L: faults missed by the first L LFSR patterns are very hard.
std::uint64_t default_hardness_threshold(std::size_t inputs);
// Default upper bound of the PRTP search for a circuit.
std::uint64_t default_prtp_limit(std::size_t inputs);

struct Phase1Result {
  std::vector<Fault> very_hard;
  std::vector<Pattern> patterns;
  std::vector<bool> detected;  // aligned with the fault list passed in
};

// Classifies faults undetected by the first `threshold` patterns of `lfsr`
// as very hard to detect and generates deterministic patterns for them.
Phase1Result generate_phase1(const Netlist& nl, std::span<const Fault> faults, const Lfsr& lfsr,
                             std::uint64_t threshold, const AtpgOptions& atpg_options = {});

struct CircuitOracleOptions {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> taps;  // default: built-in table for min(inputs, 32)
  bool three_phase = true;            // false disables phase 1
  std::optional<std::uint64_t> hardness_threshold;
  std::uint64_t max_prtp = 0;  // PRTP horizon the oracle precomputes
  AtpgOptions atpg;
};

// Oracle backed by the gate-level circuit. Phase 1 is fixed at
// construction. Phase 2 for n PRTPs uses, from one compacted ATPG pattern
// list covering the faults left after phase 1, the first pattern detecting
// each fault the n-pattern LFSR prefix missed; the count therefore never
// grows with n.
class CircuitOracle final : public CoverageOracle {
 public:
  CircuitOracle(const Netlist& nl, const CircuitOracleOptions& options);

  OracleAnswer query(std::uint64_t n_prtp) const override;
  std::uint64_t seed() const override { return options_.seed; }
  std::uint64_t max_prtp() const override { return options_.max_prtp; }
  std::optional<std::uint64_t> largest_point_in(std::uint64_t after,
                                                std::uint64_t up_to) const override;

  const Netlist& netlist() const { return nl_; }
  const std::vector<Fault>& faults() const { return faults_; }
  const Lfsr& lfsr() const { return lfsr_; }
  const Phase1Result& phase1() const { return phase1_; }
  std::vector<Pattern> prtp_patterns(std::uint64_t n_prtp) const;
  std::vector<Pattern> phase2_patterns(std::uint64_t n_prtp) const;
  // Faults no pattern source detects (untestable or abandoned by ATPG).
  std::vector<Fault> uncovered_faults() const;

 private:
  std::vector<std::size_t> phase2_selection(std::uint64_t n_prtp) const;

  Netlist nl_;
  CircuitOracleOptions options_;
  std::vector<Fault> faults_;
  Lfsr lfsr_;
  Phase1Result phase1_;
  std::vector<Fault> residual_;               // faults left after phase 1
  std::vector<std::size_t> first_prtp_;       // per residual fault
  std::vector<Pattern> master_;               // compacted ATPG patterns
  std::vector<std::size_t> first_master_;     // per residual fault
};

struct TatCurvePoint {
  std::uint64_t n_prtp = 0;
  Micros tat;
  TestSet test_set;
  std::uint64_t residual_faults = 0;
  friend bool operator==(const TatCurvePoint&, const TatCurvePoint&) = default;
};

// TAT of one PRTP count, without memoization.
TatCurvePoint evaluate_tat(const CoreSpec& core, const CoverageOracle& oracle,
                           std::uint64_t n_prtp);

// Memoizing evaluate_tat for one (core, oracle). Safe to call concurrently.
class TatEvaluator {
 public:
  TatEvaluator(CoreSpec core, const CoverageOracle& oracle) : core_(core), oracle_(oracle) {}

  TatCurvePoint operator()(std::uint64_t n_prtp);
  std::size_t oracle_calls() const;
  std::vector<TatCurvePoint> evaluated() const;
  const CoreSpec& core() const { return core_; }

 private:
  CoreSpec core_;
  const CoverageOracle& oracle_;
  mutable std::mutex mu_;
  std::map<std::uint64_t, TatCurvePoint> memo_;
};

struct SearchResult {
  TatCurvePoint best;
  std::vector<TatCurvePoint> probes;  // ascending n_prtp
  std::size_t oracle_calls = 0;
  bool fast_path = false;
};

// Five-probe interval search for the PRTP count with minimum TAT on the
// grid min_n, min_n + g, ..., max_n. Returns the best point ever probed;
// ties go to the smaller PRTP count.
SearchResult find_optimal_nprtp(TatEvaluator& eval, std::uint64_t min_n, std::uint64_t max_n,
                                std::uint64_t granularity = 1);
SearchResult find_optimal_nprtp(const CoreSpec& core, const CoverageOracle& oracle,
                                std::uint64_t min_n, std::uint64_t max_n,
                                std::uint64_t granularity = 1);

// Every grid point; the ground truth the search is checked against.
SearchResult exhaustive_sweep(TatEvaluator& eval, std::uint64_t min_n, std::uint64_t max_n,
                              std::uint64_t granularity = 1);

// Scan-model core for a circuit: ac_e = PIs + PPIs, one cycle per PRTP.
CoreSpec core_from_netlist(const Netlist& nl, CoreId id = 1,
                           Frequency f_e = Frequency::from_mhz(100),
                           Frequency f_b = Frequency::from_mhz(100),
                           Power p_m = Power::from_units(1));

struct TestGenOptions {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> taps;
  bool three_phase = true;
  std::optional<std::uint64_t> hardness_threshold;
  std::uint64_t min_prtp = 0;
  std::optional<std::uint64_t> max_prtp;  // default_prtp_limit(inputs)
  std::uint64_t granularity = 1;
  bool exhaustive = false;  // sweep every grid point instead of searching
  AtpgOptions atpg;
};

struct HybridTestResult {
  CoreSpec core;
  TestSet test_set;
  Micros tat;
  SearchResult search;
  std::vector<Pattern> phase1;
  std::vector<Pattern> phase2;
  std::size_t total_faults = 0;
  std::size_t detected_faults = 0;
  // Coverage shortfall: faults no pattern detects. Not an error.
  std::vector<Fault> undetected;
};

// Three-phase hybrid test generation for one circuit (two-phase when
// options.three_phase is false).
HybridTestResult build_test_set(const Netlist& nl, const CoreSpec& core,
                                const TestGenOptions& options = {});

}  // namespace socbist
