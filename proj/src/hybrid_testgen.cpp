// SPDX-License-Identifier: Apache-2.0
#include "socbist/hybrid_testgen.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <set>

#include "socbist/error.hpp"

namespace socbist {

// ---------------------------------------------------------------- CurveOracle

CurveOracle::CurveOracle(std::vector<CurveRow> rows, std::uint64_t seed)
    : rows_(std::move(rows)), seed_(seed) {
  if (rows_.empty()) throw Error(ErrorKind::InvalidArgument, "coverage curve has no rows");
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (rows_[i].n_prtp <= rows_[i - 1].n_prtp)
      throw Error(ErrorKind::MonotonicityViolation, "n_prtp must strictly increase", i + 2);
    if (rows_[i].n_dtp_phase2 > rows_[i - 1].n_dtp_phase2)
      throw Error(ErrorKind::MonotonicityViolation,
                  "n_dtp_phase2 must not increase with n_prtp", i + 2);
  }
}

const CurveRow* CurveOracle::find(std::uint64_t n_prtp) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), n_prtp,
                             [](const CurveRow& r, std::uint64_t n) { return r.n_prtp < n; });
  if (it == rows_.end() || it->n_prtp != n_prtp) return nullptr;
  return &*it;
}

const CurveRow* CurveOracle::last_row_in(std::uint64_t after, std::uint64_t up_to) const {
  auto it = std::upper_bound(rows_.begin(), rows_.end(), up_to,
                             [](std::uint64_t n, const CurveRow& r) { return n < r.n_prtp; });
  if (it == rows_.begin()) return nullptr;
  --it;
  return it->n_prtp > after ? &*it : nullptr;
}

OracleAnswer CurveOracle::query(std::uint64_t n_prtp) const {
  const CurveRow* row = find(n_prtp);
  if (!row)
    throw Error(ErrorKind::OracleRangeExceeded,
                "curve has no row for n_prtp = " + std::to_string(n_prtp));
  return {row->n_dtp_phase1, row->n_dtp_phase2, 0};
}

std::optional<std::uint64_t> CurveOracle::largest_point_in(std::uint64_t after,
                                                          std::uint64_t up_to) const {
  const CurveRow* row = last_row_in(after, up_to);
  if (!row) return std::nullopt;
  return row->n_prtp;
}

std::uint64_t CurveOracle::max_prtp() const { return rows_.empty() ? 0 : rows_.back().n_prtp; }

// ------------------------------------------------------------- circuit side

std::uint64_t default_hardness_threshold(std::size_t inputs) {
  const std::uint64_t l = 10 * (std::uint64_t{1} << std::min<std::size_t>(inputs, 16));
  return std::min<std::uint64_t>(l, 100'000);
}

std::uint64_t default_prtp_limit(std::size_t inputs) { return default_hardness_threshold(inputs); }

Phase1Result generate_phase1(const Netlist& nl, std::span<const Fault> faults, const Lfsr& lfsr,
                             std::uint64_t threshold, const AtpgOptions& atpg_options) {
  Phase1Result r;
  const auto stream = lfsr_sequence(lfsr, threshold, nl.num_inputs());
  const auto easy = fault_simulate(nl, stream, faults);
  for (std::size_t i = 0; i < faults.size(); ++i)
    if (!easy[i]) r.very_hard.push_back(faults[i]);
  r.patterns = atpg(nl, r.very_hard, atpg_options).patterns;
  r.detected = fault_simulate(nl, r.patterns, faults);
  return r;
}

namespace {

Lfsr make_lfsr(const Netlist& nl, const CircuitOracleOptions& o) {
  if (!o.taps) return default_lfsr(nl.num_inputs(), o.seed);
  if (*o.taps == 0) throw Error(ErrorKind::InvalidTaps, "taps must be nonzero");
  const auto width = static_cast<unsigned>(64 - std::countl_zero(*o.taps));
  return Lfsr(width, *o.taps, o.seed);
}

}  // namespace

CircuitOracle::CircuitOracle(const Netlist& nl, const CircuitOracleOptions& options)
    : nl_(nl), options_(options), faults_(fault_list(nl_)), lfsr_(make_lfsr(nl_, options_)) {
  if (options_.three_phase) {
    const std::uint64_t l =
        options_.hardness_threshold.value_or(default_hardness_threshold(nl_.num_inputs()));
    phase1_ = generate_phase1(nl_, faults_, lfsr_, l, options_.atpg);
  } else {
    phase1_.detected.assign(faults_.size(), false);
  }
  for (std::size_t i = 0; i < faults_.size(); ++i)
    if (!phase1_.detected[i]) residual_.push_back(faults_[i]);

  const auto stream = prtp_patterns(options_.max_prtp);
  first_prtp_ = first_detection(nl_, stream, residual_);
  master_ = atpg(nl_, residual_, options_.atpg).patterns;
  first_master_ = first_detection(nl_, master_, residual_);
}

std::optional<std::uint64_t> CircuitOracle::largest_point_in(std::uint64_t after,
                                                            std::uint64_t up_to) const {
  const std::uint64_t n = std::min(up_to, options_.max_prtp);
  if (n <= after) return std::nullopt;
  return n;
}

std::vector<Pattern> CircuitOracle::prtp_patterns(std::uint64_t n_prtp) const {
  return lfsr_sequence(lfsr_, n_prtp, nl_.num_inputs());
}

std::vector<std::size_t> CircuitOracle::phase2_selection(std::uint64_t n_prtp) const {
  if (n_prtp > options_.max_prtp)
    throw Error(ErrorKind::OracleRangeExceeded,
                "n_prtp " + std::to_string(n_prtp) + " beyond the oracle horizon " +
                    std::to_string(options_.max_prtp));
  std::set<std::size_t> chosen;
  for (std::size_t i = 0; i < residual_.size(); ++i) {
    const bool random_hit = first_prtp_[i] != kNotDetected && first_prtp_[i] < n_prtp;
    if (!random_hit && first_master_[i] != kNotDetected) chosen.insert(first_master_[i]);
  }
  return {chosen.begin(), chosen.end()};
}

std::vector<Pattern> CircuitOracle::phase2_patterns(std::uint64_t n_prtp) const {
  std::vector<Pattern> out;
  for (std::size_t idx : phase2_selection(n_prtp)) out.push_back(master_[idx]);
  return out;
}

OracleAnswer CircuitOracle::query(std::uint64_t n_prtp) const {
  OracleAnswer a;
  a.n_dtp_phase1 = phase1_.patterns.size();
  a.n_dtp_phase2 = phase2_selection(n_prtp).size();
  for (std::size_t i = 0; i < residual_.size(); ++i) {
    const bool random_hit = first_prtp_[i] != kNotDetected && first_prtp_[i] < n_prtp;
    if (!random_hit && first_master_[i] == kNotDetected) ++a.residual_faults;
  }
  return a;
}

std::vector<Fault> CircuitOracle::uncovered_faults() const {
  std::vector<Fault> out;
  for (std::size_t i = 0; i < residual_.size(); ++i)
    if (first_prtp_[i] == kNotDetected && first_master_[i] == kNotDetected)
      out.push_back(residual_[i]);
  return out;
}

// ------------------------------------------------------------------ TAT

TatCurvePoint evaluate_tat(const CoreSpec& core, const CoverageOracle& oracle,
                           std::uint64_t n_prtp) {
  const OracleAnswer a = oracle.query(n_prtp);
  TatCurvePoint p;
  p.n_prtp = n_prtp;
  p.test_set = TestSet{core.id, a.n_dtp_phase1, n_prtp, a.n_dtp_phase2};
  p.tat = test_time(p.test_set, core);
  p.residual_faults = a.residual_faults;
  return p;
}

TatCurvePoint TatEvaluator::operator()(std::uint64_t n_prtp) {
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(n_prtp); it != memo_.end()) return it->second;
  }
  TatCurvePoint p = evaluate_tat(core_, oracle_, n_prtp);
  std::lock_guard lock(mu_);
  return memo_.try_emplace(n_prtp, p).first->second;
}

std::size_t TatEvaluator::oracle_calls() const {
  std::lock_guard lock(mu_);
  return memo_.size();
}

std::vector<TatCurvePoint> TatEvaluator::evaluated() const {
  std::lock_guard lock(mu_);
  std::vector<TatCurvePoint> out;
  for (const auto& [n, p] : memo_) out.push_back(p);
  return out;
}

namespace {

bool better(const TatCurvePoint& a, const TatCurvePoint& b) {
  return a.tat < b.tat || (a.tat == b.tat && a.n_prtp < b.n_prtp);
}

// Grid index <-> PRTP count.
struct Grid {
  std::uint64_t min_n, max_n, g;
  std::uint64_t last() const { return (max_n - min_n + g - 1) / g; }
  std::uint64_t at(std::uint64_t i) const { return i >= last() ? max_n : min_n + i * g; }
};

// Evaluates the not-yet-known points concurrently; results do not depend on
// completion order because every point is a pure function of n.
void evaluate_all(TatEvaluator& eval, const std::vector<std::uint64_t>& ns) {
  const auto count = static_cast<std::ptrdiff_t>(ns.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static, 1) if (count > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      eval(ns[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(socbist_probe_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SearchResult collect(TatEvaluator& eval, std::uint64_t min_n, std::uint64_t max_n) {
  SearchResult r;
  for (const TatCurvePoint& p : eval.evaluated()) {
    if (p.n_prtp < min_n || p.n_prtp > max_n) continue;
    if (r.probes.empty() || better(p, r.best)) r.best = p;
    r.probes.push_back(p);
  }
  r.oracle_calls = r.probes.size();
  return r;
}

void check_bounds(std::uint64_t min_n, std::uint64_t max_n, std::uint64_t g) {
  if (min_n >= max_n)
    throw Error(ErrorKind::InvalidArgument, "search needs min < max (got " +
                                                std::to_string(min_n) + ", " +
                                                std::to_string(max_n) + ")");
  if (g == 0) throw Error(ErrorKind::InvalidArgument, "granularity must be >= 1");
}

}  // namespace

SearchResult find_optimal_nprtp(TatEvaluator& eval, std::uint64_t min_n, std::uint64_t max_n,
                                std::uint64_t granularity) {
  check_bounds(min_n, max_n, granularity);
  const Grid grid{min_n, max_n, granularity};
  auto tat = [&](std::uint64_t i) { return eval(grid.at(i)).tat; };
  const std::uint64_t k = grid.last();

  // Right end strictly better than the left end and still descending:
  // report max as optimal.
  evaluate_all(eval, {grid.at(0), grid.at(k), grid.at(k - 1)});
  if (tat(k) < tat(0) && tat(k) <= tat(k - 1)) {
    SearchResult r = collect(eval, min_n, max_n);
    r.best = eval(max_n);
    r.fast_path = true;
    return r;
  }

  std::uint64_t lo = 0;
  std::uint64_t hi = k;
  while (hi - lo > 4) {
    const std::uint64_t w = hi - lo;
    const std::uint64_t q1 = lo + w / 4;
    const std::uint64_t mid = lo + w / 2;
    const std::uint64_t q3 = lo + 3 * w / 4;
    evaluate_all(eval, {grid.at(lo), grid.at(q1), grid.at(mid), grid.at(q3), grid.at(hi)});
    const Micros t2 = tat(q1), t3 = tat(mid), t4 = tat(q3), t5 = tat(hi);
    if (t5 > t4 && t4 > t3) {
      // Rising through the upper half: the minimum lies below q3.
      if (t2 < t3) {
        hi = mid;
      } else {
        lo = q1;
        hi = q3;
      }
    } else {
      lo = mid;
    }
  }
  std::vector<std::uint64_t> rest;
  for (std::uint64_t i = lo; i <= hi; ++i) rest.push_back(grid.at(i));
  evaluate_all(eval, rest);
  return collect(eval, min_n, max_n);
}

SearchResult find_optimal_nprtp(const CoreSpec& core, const CoverageOracle& oracle,
                                std::uint64_t min_n, std::uint64_t max_n,
                                std::uint64_t granularity) {
  TatEvaluator eval(core, oracle);
  return find_optimal_nprtp(eval, min_n, max_n, granularity);
}

SearchResult exhaustive_sweep(TatEvaluator& eval, std::uint64_t min_n, std::uint64_t max_n,
                              std::uint64_t granularity) {
  check_bounds(min_n, max_n, granularity);
  const Grid grid{min_n, max_n, granularity};
  std::vector<std::uint64_t> all;
  for (std::uint64_t i = 0; i <= grid.last(); ++i) all.push_back(grid.at(i));
  evaluate_all(eval, all);
  return collect(eval, min_n, max_n);
}

// --------------------------------------------------------------- pipeline

CoreSpec core_from_netlist(const Netlist& nl, CoreId id, Frequency f_e, Frequency f_b,
                           Power p_m) {
  CoreSpec c;
  c.id = id;
  c.p_m = p_m;
  c.f_e = f_e;
  c.f_b = f_b;
  c.ac_b = 1;
  c.pis = nl.num_pis;
  c.ppis = nl.num_ppis();
  c.ac_e = std::max<std::uint64_t>(1, c.pis + c.ppis);
  return c;
}

HybridTestResult build_test_set(const Netlist& nl, const CoreSpec& core,
                                const TestGenOptions& options) {
  CircuitOracleOptions oo;
  oo.seed = options.seed;
  oo.taps = options.taps;
  oo.three_phase = options.three_phase;
  oo.hardness_threshold = options.hardness_threshold;
  oo.max_prtp = options.max_prtp.value_or(default_prtp_limit(nl.num_inputs()));
  oo.atpg = options.atpg;
  oo.atpg.seed = options.seed;
  const CircuitOracle oracle(nl, oo);

  TatEvaluator eval(core, oracle);
  HybridTestResult r;
  r.core = core;
  r.search = options.exhaustive
                 ? exhaustive_sweep(eval, options.min_prtp, oo.max_prtp, options.granularity)
                 : find_optimal_nprtp(eval, options.min_prtp, oo.max_prtp, options.granularity);
  r.test_set = r.search.best.test_set;
  r.tat = r.search.best.tat;
  r.phase1 = oracle.phase1().patterns;
  r.phase2 = oracle.phase2_patterns(r.test_set.n_prtp);

  std::vector<Pattern> all = r.phase1;
  auto prtps = oracle.prtp_patterns(r.test_set.n_prtp);
  all.insert(all.end(), prtps.begin(), prtps.end());
  all.insert(all.end(), r.phase2.begin(), r.phase2.end());
  const auto faults = oracle.faults();
  const auto detected = fault_simulate(nl, all, faults);
  r.total_faults = faults.size();
  for (std::size_t i = 0; i < faults.size(); ++i) {
    if (detected[i])
      ++r.detected_faults;
    else
      r.undetected.push_back(faults[i]);
  }
  return r;
}

}  // namespace socbist
