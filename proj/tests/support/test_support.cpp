// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#ifndef SOCBIST_FIXTURE_DIR
#error "SOCBIST_FIXTURE_DIR must be defined"
#endif

namespace testsupport {

std::string fixture(const std::string& name) { return std::string(SOCBIST_FIXTURE_DIR) + "/" + name; }

std::string random_bench(std::mt19937_64& rng, const CircuitShape& shape) {
  static const char* kKinds[] = {"AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUFF"};
  std::ostringstream out;
  std::vector<std::string> nets;
  std::vector<int> fanout;
  for (std::size_t i = 0; i < shape.inputs; ++i) {
    nets.push_back("i" + std::to_string(i));
    fanout.push_back(0);
    out << "INPUT(" << nets.back() << ")\n";
  }
  std::ostringstream body;
  for (std::size_t g = 0; g < shape.gates; ++g) {
    const char* kind = kKinds[rng() % 8];
    const bool unary = std::string(kind) == "NOT" || std::string(kind) == "BUFF";
    std::size_t fanin = unary ? 1 : 2 + rng() % (std::max<std::size_t>(shape.max_fanin, 2) - 1);
    fanin = std::min(fanin, nets.size());
    std::vector<std::size_t> picks;
    // first input prefers a net nobody reads yet
    std::vector<std::size_t> unused;
    for (std::size_t i = 0; i < nets.size(); ++i)
      if (fanout[i] == 0) unused.push_back(i);
    if (!unused.empty()) picks.push_back(unused[rng() % unused.size()]);
    while (picks.size() < fanin) {
      const std::size_t c = rng() % nets.size();
      if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
    }
    if (unary && picks.empty()) picks.push_back(rng() % nets.size());
    const std::string name = "g" + std::to_string(g);
    body << name << " = " << kind << '(';
    for (std::size_t k = 0; k < picks.size(); ++k) {
      body << (k ? ", " : "") << nets[picks[k]];
      ++fanout[picks[k]];
    }
    body << ")\n";
    nets.push_back(name);
    fanout.push_back(0);
  }
  for (std::size_t i = 0; i < nets.size(); ++i)
    if (fanout[i] == 0) out << "OUTPUT(" << nets[i] << ")\n";
  out << body.str();
  return out.str();
}

socbist::Netlist random_netlist(std::mt19937_64& rng, const CircuitShape& shape) {
  return socbist::parse_bench(random_bench(rng, shape), "random");
}

socbist::SocSpec random_soc(std::mt19937_64& rng, std::size_t cores) {
  using namespace socbist;
  SocSpec soc;
  soc.name = "random";
  std::int64_t max_pm = 0, sum_pm = 0;
  for (std::size_t i = 0; i < cores; ++i) {
    CoreSpec c;
    c.id = static_cast<CoreId>(i + 1);
    const std::int64_t pm = 1 + static_cast<std::int64_t>(rng() % 100);
    c.p_m = Power::from_units(pm);
    c.t_vd = Micros::from_units(static_cast<std::int64_t>(rng() % 501));
    c.t_vp = Micros::from_units(static_cast<std::int64_t>(rng() % 501));
    c.f_b = Frequency::from_mhz(100);
    c.f_e = Frequency::from_mhz(100);
    soc.cores.push_back(c);
    max_pm = std::max(max_pm, pm);
    sum_pm += pm;
  }
  soc.p_max = Power::from_units(max_pm + static_cast<std::int64_t>(rng() % (sum_pm - max_pm + 1)));
  return soc;
}

std::vector<std::vector<std::uint32_t>> brute_force_groups(const socbist::SocSpec& soc) {
  const std::size_t n = soc.cores.size();
  const std::int64_t budget = soc.p_max.raw();
  std::vector<std::int64_t> pm(n);
  for (std::size_t i = 0; i < n; ++i) pm[i] = soc.cores[i].p_m.raw();
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sum += pm[i];
    if (sum > budget) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < n && maximal; ++i)
      if (!(mask >> i & 1) && sum + pm[i] <= budget) maximal = false;
    if (!maximal) continue;
    std::vector<std::uint32_t> g;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) g.push_back(static_cast<std::uint32_t>(i + 1));
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string hundredths(std::int64_t v) {
  std::string s = std::to_string(v / 100);
  const std::int64_t frac = v % 100;
  if (frac != 0) {
    s += '.';
    s += static_cast<char>('0' + frac / 10);
    if (frac % 10) s += static_cast<char>('0' + frac % 10);
  }
  return s;
}

}  // namespace

std::string replay_trace(const socbist::SocSpec& soc) {
  const std::size_t n = soc.cores.size();
  std::vector<std::int64_t> bist(n + 1), ext(n + 1);
  for (const auto& c : soc.cores) {
    bist[c.id] = c.t_vp.raw();
    ext[c.id] = c.t_vd.raw();
  }
  const auto catalog = brute_force_groups(soc);
  const std::set<std::vector<std::uint32_t>> members(catalog.begin(), catalog.end());
  auto work_left = [&] {
    for (std::size_t i = 1; i <= n; ++i)
      if (bist[i] || ext[i]) return true;
    return false;
  };

  std::ostringstream out;
  std::int64_t clock = 0;
  std::size_t index = 0;
  while (work_left()) {
    // pick the group
    std::ptrdiff_t best = -1;
    __int128 best_num = 0, best_den = 1;
    std::uint32_t best_ext = 0;
    for (std::size_t gi = 0; gi < catalog.size(); ++gi) {
      const auto& g = catalog[gi];
      std::uint32_t e = 0;
      bool busy = false;
      __int128 bsum = 0;
      for (std::uint32_t id : g) {
        busy = busy || bist[id] || ext[id];
        if (ext[id] > 0 && (e == 0 || ext[id] > ext[e])) e = id;
      }
      if (!busy) continue;
      __int128 num, den;
      const __int128 k = static_cast<__int128>(g.size());
      if (e == 0) {
        for (std::uint32_t id : g) bsum += bist[id];
        num = bsum;
        den = 100 * k;
      } else if (k == 1) {
        num = ext[e];
        den = 100;
      } else {
        for (std::uint32_t id : g)
          if (id != e) bsum += bist[id];
        num = ext[e] * bsum;
        den = 10000 * (k - 1);
      }
      bool take = best < 0;
      if (!take) {
        const __int128 lhs = num * best_den, rhs = best_num * den;
        take = lhs > rhs || (lhs == rhs && g.size() > catalog[best].size());
      }
      if (take) {
        best = static_cast<std::ptrdiff_t>(gi);
        best_num = num;
        best_den = den;
        best_ext = e;
      }
    }
    if (best < 0) return "stuck";

    // core -> 'E' or 'B'
    std::map<std::uint32_t, char> parts;
    for (std::uint32_t id : catalog[best]) {
      if (id == best_ext) parts[id] = 'E';
      else if (bist[id] > 0) parts[id] = 'B';
    }
    do {
      std::int64_t step = -1;
      for (auto [id, m] : parts) {
        const std::int64_t left = m == 'E' ? ext[id] : bist[id];
        if (step < 0 || left < step) step = left;
      }
      clock += step;
      std::vector<std::uint32_t> ids;
      std::ostringstream act, rel;
      for (auto [id, m] : parts) {
        ids.push_back(id);
        std::int64_t& left = m == 'E' ? ext[id] : bist[id];
        left -= step;
        act << ' ' << m << id;
        if (left == 0) rel << ' ' << m << id;
      }
      out << ++index << ' ' << (members.count(ids) ? "group" : "incomplete") << ' '
          << hundredths(step) << " |" << act.str() << " |" << rel.str() << '\n';
      for (auto it = parts.begin(); it != parts.end();) {
        const std::int64_t left = it->second == 'E' ? ext[it->first] : bist[it->first];
        it = left == 0 ? parts.erase(it) : std::next(it);
      }
    } while (best_ext != 0 && ext[best_ext] > 0);
  }
  out << "total " << hundredths(clock) << '\n';
  return out.str();
}

std::string trace_of(const socbist::ScheduleGraph& graph) {
  std::ostringstream out;
  auto part = [](const socbist::ActivePart& p) {
    return std::string(p.mode == socbist::TestMode::External ? " E" : " B") +
           std::to_string(p.core);
  };
  for (const auto& node : graph.nodes) {
    out << node.index << ' ' << socbist::to_string(node.kind) << ' ' << hundredths(node.duration.raw())
        << " |";
    for (const auto& p : node.active) out << part(p);
    out << " |";
    for (const auto& p : node.releases) out << part(p);
    out << '\n';
  }
  out << "total " << hundredths(graph.total_time.raw()) << '\n';
  return out.str();
}

}  // namespace testsupport
