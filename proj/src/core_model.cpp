// SPDX-License-Identifier: Apache-2.0
#include "socbist/core_model.hpp"

#include <limits>

#include "socbist/error.hpp"

namespace socbist {

const CoreSpec& SocSpec::core(CoreId id) const {
  if (id == 0 || id > cores.size() || cores[id - 1].id != id)
    throw Error(ErrorKind::InvalidArgument, "no core with id " + std::to_string(id));
  return cores[id - 1];
}

void validate(const CoreSpec& core) {
  auto fail = [&](const char* what) {
    throw Error(ErrorKind::InvalidArgument,
                "core " + std::to_string(core.id) + ": " + what);
  };
  if (core.id == 0) fail("id must be positive");
  if (core.p_m.raw() <= 0) fail("pm must be > 0");
  if (core.t_vd.raw() < 0) fail("tvd must be >= 0");
  if (core.t_vp.raw() < 0) fail("tvp must be >= 0");
  if (core.f_b.khz() <= 0) fail("fb must be > 0");
  if (core.f_e.khz() <= 0) fail("fe must be > 0");
  if (core.ac_b < 1) fail("acb must be >= 1");
  if (core.ac_e < 1) fail("ace must be >= 1");
}

void validate(const SocSpec& soc) {
  if (soc.cores.empty()) throw Error(ErrorKind::EmptySoc, "SoC '" + soc.name + "' has no cores");
  if (soc.p_max.raw() <= 0) throw Error(ErrorKind::InvalidArgument, "pmax must be > 0");
  for (std::size_t i = 0; i < soc.cores.size(); ++i) {
    const CoreSpec& c = soc.cores[i];
    validate(c);
    if (c.id != i + 1)
      throw Error(ErrorKind::NonContiguousCoreIds,
                  "core ids must be 1.." + std::to_string(soc.cores.size()) + " in order");
    if (c.p_m > soc.p_max)
      throw Error(ErrorKind::InfeasibleCore,
                  "core " + std::to_string(c.id) + " pm " + c.p_m.str() + " exceeds pmax " +
                      soc.p_max.str());
  }
}

double bist_speed(const CoreSpec& core) {
  return static_cast<double>(core.f_b.khz()) * 1e3 / static_cast<double>(core.ac_b);
}

double external_speed(const CoreSpec& core) {
  return static_cast<double>(core.f_e.khz()) * 1e3 / static_cast<double>(core.ac_e);
}

std::uint64_t test_cycles(std::uint64_t pmdv, std::uint64_t pis, std::uint64_t ppis,
                          std::uint64_t opt_prtp) {
  std::uint64_t width = 0;
  std::uint64_t shift = 0;
  std::uint64_t total = 0;
  if (__builtin_add_overflow(pis, ppis, &width) || __builtin_mul_overflow(pmdv, width, &shift) ||
      __builtin_add_overflow(shift, opt_prtp, &total))
    throw Error(ErrorKind::Overflow, "test cycle count exceeds 64 bits");
  return total;
}

Micros cycles_to_time(std::uint64_t cycles, Frequency f) {
  // us = cycles / MHz = cycles * 1000 / kHz; hundredths add another factor 100.
  const __int128 num = static_cast<__int128>(cycles) * 100000;
  const __int128 den = f.khz();
  const __int128 q = (2 * num + den) / (2 * den);
  if (q > std::numeric_limits<std::int64_t>::max())
    throw Error(ErrorKind::Overflow, "test time exceeds the fixed-point range");
  return Micros::from_raw(static_cast<std::int64_t>(q));
}

Micros prtp_time(const CoreSpec& core, std::uint64_t n_prtp) {
  std::uint64_t cycles = 0;
  if (__builtin_mul_overflow(n_prtp, core.ac_b, &cycles))
    throw Error(ErrorKind::Overflow, "PRTP cycle count exceeds 64 bits");
  return cycles_to_time(cycles, core.f_b);
}

Micros dtp_time(const CoreSpec& core, std::uint64_t n_dtp) {
  std::uint64_t cycles = 0;
  if (__builtin_mul_overflow(n_dtp, core.ac_e, &cycles))
    throw Error(ErrorKind::Overflow, "DTP cycle count exceeds 64 bits");
  return cycles_to_time(cycles, core.f_e);
}

Micros test_time(const TestSet& ts, const CoreSpec& core) {
  if (ts.core_id != core.id)
    throw Error(ErrorKind::InvalidArgument, "test set for core " + std::to_string(ts.core_id) +
                                                " applied to core " + std::to_string(core.id));
  return dtp_time(core, ts.n_dtp()) + prtp_time(core, ts.n_prtp);
}

}  // namespace socbist
