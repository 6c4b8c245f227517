// SPDX-License-Identifier: Apache-2.0
#include "socbist/cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "socbist/error.hpp"
#include "socbist/fault_sim.hpp"
#include "socbist/hybrid_testgen.hpp"
#include "socbist/lfsr.hpp"
#include "socbist/netlist.hpp"
#include "socbist/power_groups.hpp"
#include "socbist/schedule_export.hpp"
#include "socbist/scheduler.hpp"
#include "socbist/soc_io.hpp"

namespace socbist {

namespace {

namespace fs = std::filesystem;

struct GroupsArgs {
  std::string soc;
  std::string pmax;
  bool json = false;
};

struct SearchArgs {
  std::string bench;
  std::string curve;
  std::string core;
  CoreId core_id = 1;
  std::optional<std::uint64_t> min_n;
  std::optional<std::uint64_t> max_n;
  std::uint64_t seed = 1;
  std::uint64_t granularity = 1;
  bool exhaustive = false;
  bool two_phase = false;
  std::string emit_curve;
  bool json = false;
};

struct FaultsimArgs {
  std::string bench;
  std::string patterns;
  std::string lfsr;
  bool list_undetected = false;
};

struct ScheduleArgs {
  std::string soc;
  std::string pmax;
  bool augment = false;
  std::string curves;
  std::string out;
  bool json = false;
};

struct ReportArgs {
  std::string soc;
  std::vector<std::string> bench;
  std::uint64_t seed = 1;
};

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << data;
  if (!f) throw Error(ErrorKind::Io, "write failed: " + path);
}

SocSpec load_soc(const std::string& path, const std::string& pmax) {
  SocSpec soc = parse_soc(read_file(path));
  if (!pmax.empty()) {
    auto p = Power::parse(pmax);
    if (!p || p->is_zero()) throw Error(ErrorKind::InvalidArgument, "bad --pmax: " + pmax);
    soc.p_max = *p;
    validate(soc);
  }
  return soc;
}

Netlist load_bench(const std::string& path) {
  return parse_bench(read_file(path), fs::path(path).stem().string());
}

std::string percent(std::size_t num, std::size_t den) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << (den == 0 ? 100.0 : 100.0 * num / den) << '%';
  return s.str();
}

std::uint64_t rate(double patterns_per_s) {
  return static_cast<std::uint64_t>(std::llround(patterns_per_s));
}

// ---- groups ---------------------------------------------------------------

void cmd_groups(const GroupsArgs& a, std::ostream& out) {
  const SocSpec soc = load_soc(a.soc, a.pmax);
  const GroupCatalog catalog = enumerate_groups(soc);
  if (a.json) {
    out << groups_to_json(catalog);
    return;
  }
  for (const PowerGroup& g : catalog) out << g.str() << '\n';
}

// ---- prtp-search ----------------------------------------------------------

void print_search(const SearchResult& r, const CoreSpec& core, bool json, std::ostream& out) {
  const TestSet& ts = r.best.test_set;
  if (json) {
    nlohmann::json probes = nlohmann::json::array();
    for (const TatCurvePoint& p : r.probes)
      probes.push_back({{"n_prtp", p.n_prtp}, {"tat_us", p.tat.str()}});
    nlohmann::json doc = {{"core", core.id},
                          {"n_prtp", ts.n_prtp},
                          {"n_dtp_phase1", ts.n_dtp_phase1},
                          {"n_dtp_phase2", ts.n_dtp_phase2},
                          {"tat_us", r.best.tat.str()},
                          {"oracle_calls", r.oracle_calls},
                          {"fast_path", r.fast_path},
                          {"probes", probes}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "core " << core.id << '\n'
      << "n_prtp " << ts.n_prtp << '\n'
      << "n_dtp_phase1 " << ts.n_dtp_phase1 << '\n'
      << "n_dtp_phase2 " << ts.n_dtp_phase2 << '\n'
      << "tat_us " << r.best.tat.str() << '\n'
      << "oracle_calls " << r.oracle_calls << '\n'
      << "fast_path " << (r.fast_path ? "yes" : "no") << '\n';
}

std::vector<CurveRow> curve_of(const SearchResult& r) {
  std::vector<CurveRow> rows;
  for (const TatCurvePoint& p : r.probes)
    rows.push_back({p.n_prtp, p.test_set.n_dtp_phase1, p.test_set.n_dtp_phase2});
  return rows;
}

void cmd_prtp_search(const SearchArgs& a, std::ostream& out) {
  if (a.bench.empty() == a.curve.empty())
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --bench or --curve");
  if (a.granularity == 0) throw Error(ErrorKind::InvalidArgument, "--granularity must be > 0");

  if (!a.bench.empty()) {
    const Netlist nl = load_bench(a.bench);
    TestGenOptions opt;
    opt.seed = a.seed;
    opt.three_phase = !a.two_phase;
    opt.min_prtp = a.min_n.value_or(0);
    opt.max_prtp = a.max_n;
    opt.granularity = a.granularity;
    opt.exhaustive = a.exhaustive;
    const CoreSpec core = core_from_netlist(nl);
    const HybridTestResult r = build_test_set(nl, core, opt);
    print_search(r.search, core, a.json, out);
    if (!a.json)
      out << "coverage " << percent(r.detected_faults, r.total_faults) << " (" << r.detected_faults
          << '/' << r.total_faults << ")\n";
    if (!a.emit_curve.empty()) write_file(a.emit_curve, serialize_curve(curve_of(r.search)));
    return;
  }

  if (a.core.empty()) throw Error(ErrorKind::InvalidArgument, "--curve needs --core <specfile>");
  const SocSpec soc = parse_soc(read_file(a.core));
  const CoreSpec core = soc.core(a.core_id);
  const CurveOracle oracle(parse_curve(read_file(a.curve)), a.seed);
  const std::uint64_t lo = a.min_n.value_or(oracle.rows().front().n_prtp);
  const std::uint64_t hi = a.max_n.value_or(oracle.max_prtp());
  if (lo > hi) throw Error(ErrorKind::InvalidArgument, "--min exceeds --max");
  TatEvaluator eval(core, oracle);
  const SearchResult r = a.exhaustive ? exhaustive_sweep(eval, lo, hi, a.granularity)
                                      : find_optimal_nprtp(eval, lo, hi, a.granularity);
  print_search(r, core, a.json, out);
  if (!a.emit_curve.empty()) write_file(a.emit_curve, serialize_curve(curve_of(r)));
}

// ---- faultsim -------------------------------------------------------------

std::vector<Pattern> parse_hex_patterns(const std::string& text, std::size_t width) {
  std::vector<Pattern> patterns;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const std::size_t digits = (width + 3) / 4;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string hex = line.substr(b, e - b + 1);
    if (hex.size() != digits)
      throw Error(ErrorKind::VectorWidthMismatch,
                  "expected " + std::to_string(digits) + " hex digits for " +
                      std::to_string(width) + " inputs",
                  lineno);
    Pattern p(width, 0);
    for (std::size_t d = 0; d < digits; ++d) {
      const char c = hex[digits - 1 - d];
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw Error(ErrorKind::Syntax, std::string("bad hex digit '") + c + "'", lineno);
      for (int k = 0; k < 4; ++k) {
        const std::size_t bit = d * 4 + k;
        if (!((v >> k) & 1)) continue;
        if (bit >= width)
          throw Error(ErrorKind::VectorWidthMismatch, "bit beyond the input count", lineno);
        p[bit] = 1;
      }
    }
    patterns.push_back(std::move(p));
  }
  return patterns;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || s[0] == '-')
    throw Error(ErrorKind::InvalidArgument, std::string("bad ") + what + ": '" + s + "'");
  return v;
}

std::vector<Pattern> lfsr_patterns(const std::string& spec, std::size_t width) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 3) throw Error(ErrorKind::InvalidArgument, "--lfsr expects taps,seed,n");
  const std::uint64_t taps = parse_u64(parts[0], "taps");
  const std::uint64_t seed = parse_u64(parts[1], "seed");
  const std::uint64_t n = parse_u64(parts[2], "n");
  // taps 0: built-in polynomial for min(width, 32)
  Lfsr lfsr = taps == 0 ? default_lfsr(width, seed) : [&] {
    unsigned w = 0;
    for (std::uint64_t t = taps; t != 0; t >>= 1) ++w;
    return Lfsr(w, taps, seed);
  }();
  return lfsr_sequence(lfsr, n, width);
}

void cmd_faultsim(const FaultsimArgs& a, std::ostream& out) {
  if (a.patterns.empty() == a.lfsr.empty())
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --patterns or --lfsr");
  const Netlist nl = load_bench(a.bench);
  const std::size_t width = nl.inputs.size();
  const std::vector<Pattern> patterns = a.patterns.empty()
                                            ? lfsr_patterns(a.lfsr, width)
                                            : parse_hex_patterns(read_file(a.patterns), width);
  const std::vector<Fault> faults = fault_list(nl);
  const std::vector<bool> det = fault_simulate(nl, patterns, faults);
  std::size_t detected = 0;
  for (bool d : det) detected += d;
  out << "patterns " << patterns.size() << '\n'
      << "faults " << faults.size() << '\n'
      << "detected " << detected << '\n'
      << "coverage " << percent(detected, faults.size()) << '\n';
  if (a.list_undetected)
    for (std::size_t i = 0; i < faults.size(); ++i)
      if (!det[i]) out << "undetected " << fault_name(nl, faults[i]) << '\n';
}

// ---- schedule -------------------------------------------------------------

std::string augment_log(const std::vector<Augmentation>& applied) {
  std::ostringstream s;
  for (const Augmentation& x : applied)
    s << "augment node " << x.node_index << " core " << x.core << " n_prtp " << x.old_prtp << "->"
      << x.new_prtp << " total " << x.old_total.str() << "->" << x.new_total.str() << " us\n";
  return s.str();
}

void cmd_schedule(const ScheduleArgs& a, std::ostream& out) {
  SocSpec soc = load_soc(a.soc, a.pmax);
  const GroupCatalog catalog = enumerate_groups(soc);
  ScheduleGraph graph = build_schedule(soc, catalog);
  std::vector<Augmentation> applied;

  if (a.augment) {
    if (a.curves.empty()) throw Error(ErrorKind::InvalidArgument, "--augment needs --curves <dir>");
    if (!fs::is_directory(a.curves))
      throw Error(ErrorKind::Io, "not a directory: " + a.curves);
    std::vector<std::unique_ptr<CurveOracle>> owned;
    std::map<CoreId, const CoverageOracle*> oracles;
    for (const CoreSpec& c : soc.cores) {
      const fs::path p = fs::path(a.curves) / ("core" + std::to_string(c.id) + ".csv");
      if (!fs::exists(p)) continue;
      owned.push_back(std::make_unique<CurveOracle>(parse_curve(read_file(p.string()))));
      oracles[c.id] = owned.back().get();
    }
    AugmentResult r = augment_incomplete(soc, catalog, graph, oracles);
    graph = std::move(r.graph);
    soc = std::move(r.soc);
    applied = std::move(r.applied);
  }

  std::string data;
  const std::string ext = a.out.empty() ? "" : fs::path(a.out).extension().string();
  if (ext == ".json" || (a.out.empty() && a.json)) {
    data = schedule_to_json(graph);
  } else if (ext == ".svg") {
    data = schedule_to_svg(graph, soc);
  } else if (ext.empty() || ext == ".txt") {
    data = augment_log(applied) + schedule_to_text(graph);
  } else {
    throw Error(ErrorKind::InvalidArgument, "--out must end in .svg, .json or .txt");
  }
  if (a.out.empty()) out << data;
  else write_file(a.out, data);
}

// ---- report ---------------------------------------------------------------

void cmd_report(const ReportArgs& a, std::ostream& out) {
  if (a.soc.empty() && a.bench.empty())
    throw Error(ErrorKind::InvalidArgument, "report needs --soc and/or --bench");
  if (!a.soc.empty()) {
    const SocSpec soc = load_soc(a.soc, "");
    out << "soc " << soc.name << " pmax " << soc.p_max.str() << " cores " << soc.cores.size()
        << '\n';
    out << "core  pm  tvd_us  tvp_us  fb_mhz  acb  S_B  S_E\n";
    for (const CoreSpec& c : soc.cores)
      out << c.id << "  " << c.p_m.str() << "  " << c.t_vd.str() << "  " << c.t_vp.str() << "  "
          << c.f_b.str_mhz() << "  " << c.ac_b << "  " << rate(bist_speed(c)) << "  "
          << rate(external_speed(c)) << '\n';
    const GroupCatalog catalog = enumerate_groups(soc);
    out << "groups";
    for (const PowerGroup& g : catalog) out << ' ' << g.str();
    out << '\n';
    const ScheduleGraph graph = build_schedule(soc, catalog);
    Micros serial;
    for (const CoreSpec& c : soc.cores) serial += c.t_vd + c.t_vp;
    out << "nodes " << graph.nodes.size() << '\n'
        << "total_time_us " << graph.total_time.str() << '\n'
        << "serial_time_us " << serial.str() << '\n';
  }
  if (!a.bench.empty()) {
    out << "circuit  inputs  faults  S_B  S_E  n_dtp_phase1  n_prtp  n_dtp_phase2  tat_us  "
           "coverage\n";
    for (const std::string& path : a.bench) {
      const Netlist nl = load_bench(path);
      const CoreSpec core = core_from_netlist(nl);
      TestGenOptions opt;
      opt.seed = a.seed;
      const HybridTestResult r = build_test_set(nl, core, opt);
      out << nl.name << "  " << nl.inputs.size() << "  " << r.total_faults << "  "
          << rate(bist_speed(core)) << "  " << rate(external_speed(core)) << "  "
          << r.test_set.n_dtp_phase1 << "  " << r.test_set.n_prtp << "  "
          << r.test_set.n_dtp_phase2 << "  " << r.tat.str() << "  "
          << percent(r.detected_faults, r.total_faults) << '\n';
    }
  }
}

void apply_thread_env() {
  const char* env = std::getenv("SOCBIST_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0)
    throw Error(ErrorKind::InvalidArgument, std::string("bad SOCBIST_THREADS: ") + env);
  if (n > 0) omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid BIST test generation and power-constrained SoC test scheduling",
               "socbist"};
  app.require_subcommand(1);

  GroupsArgs ga;
  auto* groups = app.add_subcommand("groups", "List the maximal power-feasible core sets");
  groups->add_option("--soc", ga.soc, "SoC description file")->required();
  groups->add_option("--pmax", ga.pmax, "Override the peak-power budget");
  groups->add_flag("--json", ga.json, "Print a JSON array");

  SearchArgs sa;
  auto* search = app.add_subcommand("prtp-search", "Find the PRTP count with minimum TAT");
  auto* bench_opt = search->add_option("--bench", sa.bench, "Circuit in .bench format");
  auto* curve_opt = search->add_option("--curve", sa.curve, "Coverage curve CSV");
  bench_opt->excludes(curve_opt);
  search->add_option("--core", sa.core, "SoC file holding the core's timing (with --curve)");
  search->add_option("--core-id", sa.core_id, "Core id within --core (default 1)");
  search->add_option("--min", sa.min_n, "Smallest PRTP count");
  search->add_option("--max", sa.max_n, "Largest PRTP count");
  search->add_option("--seed", sa.seed, "LFSR seed (default 1)");
  search->add_option("--granularity", sa.granularity, "PRTP grid step (default 1)");
  search->add_flag("--exhaustive", sa.exhaustive, "Evaluate every grid point");
  search->add_flag("--two-phase", sa.two_phase, "Disable phase 1");
  search->add_option("--emit-curve", sa.emit_curve, "Write evaluated points as curve CSV");
  search->add_flag("--json", sa.json, "Print JSON");

  FaultsimArgs fa;
  auto* faultsim = app.add_subcommand("faultsim", "Stuck-at fault simulation");
  faultsim->add_option("--bench", fa.bench, "Circuit in .bench format")->required();
  auto* pat_opt = faultsim->add_option("--patterns", fa.patterns, "Hex pattern file");
  auto* lfsr_opt = faultsim->add_option("--lfsr", fa.lfsr, "taps,seed,n (taps 0 = built-in)");
  pat_opt->excludes(lfsr_opt);
  faultsim->add_flag("--list-undetected", fa.list_undetected, "Name every undetected fault");

  ScheduleArgs sc;
  auto* schedule = app.add_subcommand("schedule", "Build the test scheduling graph");
  schedule->add_option("--soc", sc.soc, "SoC description file")->required();
  schedule->add_option("--pmax", sc.pmax, "Override the peak-power budget");
  schedule->add_flag("--augment", sc.augment, "Fill incomplete nodes with extra BIST");
  schedule->add_option("--curves", sc.curves, "Directory of core<id>.csv curves");
  schedule->add_option("--out", sc.out, "Output file (.svg, .json or .txt)");
  schedule->add_flag("--json", sc.json, "Print schedule.json to stdout");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Summary tables for a SoC and/or circuits");
  report->add_option("--soc", ra.soc, "SoC description file");
  report->add_option("--bench", ra.bench, "Circuit in .bench format (repeatable)");
  report->add_option("--seed", ra.seed, "LFSR seed (default 1)");

  std::vector<const char*> argv{"socbist"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }

  try {
    apply_thread_env();
    if (groups->parsed()) cmd_groups(ga, out);
    else if (search->parsed()) cmd_prtp_search(sa, out);
    else if (faultsim->parsed()) cmd_faultsim(fa, out);
    else if (schedule->parsed()) cmd_schedule(sc, out);
    else if (report->parsed()) cmd_report(ra, out);
    out.flush();
    return 0;
  } catch (const Error& e) {
    err << "socbist: " << e.what() << '\n';
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "socbist: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace socbist
