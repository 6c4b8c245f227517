// SPDX-License-Identifier: Apache-2.0
#include "socbist/soc_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "socbist/error.hpp"

namespace socbist {

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    f(line, line_no);
  }
}

std::uint64_t parse_uint(std::string_view s, const char* what, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::Syntax,
                std::string("expected a non-negative integer for ") + what + ", got '" +
                    std::string(s) + "'",
                line);
  return v;
}

template <class T>
T parse_fixed(std::string_view s, const char* what, std::size_t line) {
  auto v = T::parse(s);
  if (!v)
    throw Error(ErrorKind::Syntax,
                std::string("expected a number with at most 2 decimals for ") + what +
                    ", got '" + std::string(s) + "'",
                line);
  return *v;
}

Frequency parse_mhz(std::string_view s, const char* what, std::size_t line) {
  auto v = Frequency::parse_mhz(s);
  if (!v || v->khz() == 0)
    throw Error(ErrorKind::Syntax,
                std::string("expected a positive frequency in MHz for ") + what + ", got '" +
                    std::string(s) + "'",
                line);
  return *v;
}

struct PendingCore {
  CoreSpec spec;
  std::optional<Frequency> fb;
  std::size_t line = 0;
};

}  // namespace

SocSpec parse_soc(std::string_view text) {
  SocSpec soc;
  std::optional<Power> pmax;
  std::optional<Frequency> ate;
  std::map<std::string, std::size_t, std::less<>> header_seen;
  std::vector<PendingCore> cores;
  std::size_t last_line = 0;

  for_each_line(text, [&](std::string_view line, std::size_t no) {
    last_line = no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokens(line);
    if (tok.empty()) return;
    const std::string_view kw = tok[0];
    if (kw != "core") {
      if (tok.size() != 2)
        throw Error(ErrorKind::Syntax, "expected '" + std::string(kw) + " <value>'", no);
      if (auto it = header_seen.find(kw); it != header_seen.end())
        throw Error(ErrorKind::Syntax,
                    "'" + std::string(kw) + "' already given at line " +
                        std::to_string(it->second),
                    no);
      if (kw == "soc") {
        soc.name = std::string(tok[1]);
      } else if (kw == "pmax") {
        pmax = parse_fixed<Power>(tok[1], "pmax", no);
        if (pmax->raw() == 0) throw Error(ErrorKind::Syntax, "pmax must be > 0", no);
      } else if (kw == "tam_width") {
        const auto w = parse_uint(tok[1], "tam_width", no);
        if (w > 0xFFFFFFFFu) throw Error(ErrorKind::Syntax, "tam_width out of range", no);
        soc.tam_width = static_cast<std::uint32_t>(w);
      } else if (kw == "ate_freq_mhz") {
        ate = parse_mhz(tok[1], "ate_freq_mhz", no);
      } else {
        throw Error(ErrorKind::Syntax, "unknown directive '" + std::string(kw) + "'", no);
      }
      header_seen.emplace(std::string(kw), no);
      return;
    }

    if (tok.size() < 2 || tok.size() % 2 != 0)
      throw Error(ErrorKind::Syntax, "expected 'core <id>' followed by key/value pairs", no);
    PendingCore pc;
    pc.line = no;
    const auto id = parse_uint(tok[1], "core id", no);
    if (id == 0 || id > 0xFFFFFFFFu) throw Error(ErrorKind::Syntax, "core id must be >= 1", no);
    pc.spec.id = static_cast<CoreId>(id);
    std::map<std::string_view, bool> seen;
    for (std::size_t i = 2; i < tok.size(); i += 2) {
      const std::string_view key = tok[i];
      const std::string_view val = tok[i + 1];
      if (seen[key])
        throw Error(ErrorKind::Syntax, "duplicate key '" + std::string(key) + "'", no);
      seen[key] = true;
      if (key == "pm") {
        pc.spec.p_m = parse_fixed<Power>(val, "pm", no);
        if (pc.spec.p_m.raw() == 0) throw Error(ErrorKind::Syntax, "pm must be > 0", no);
      } else if (key == "tvd") {
        pc.spec.t_vd = parse_fixed<Micros>(val, "tvd", no);
      } else if (key == "tvp") {
        pc.spec.t_vp = parse_fixed<Micros>(val, "tvp", no);
      } else if (key == "fb") {
        pc.fb = parse_mhz(val, "fb", no);
      } else if (key == "acb") {
        pc.spec.ac_b = parse_uint(val, "acb", no);
        if (pc.spec.ac_b == 0) throw Error(ErrorKind::Syntax, "acb must be >= 1", no);
      } else if (key == "pis") {
        pc.spec.pis = parse_uint(val, "pis", no);
      } else if (key == "ppis") {
        pc.spec.ppis = parse_uint(val, "ppis", no);
      } else {
        throw Error(ErrorKind::Syntax, "unknown core key '" + std::string(key) + "'", no);
      }
    }
    for (const char* required : {"pm", "tvd", "tvp"})
      if (!seen[required])
        throw Error(ErrorKind::Syntax, std::string("core is missing '") + required + "'", no);
    for (const PendingCore& other : cores)
      if (other.spec.id == pc.spec.id)
        throw Error(ErrorKind::DuplicateCoreId,
                    "core " + std::to_string(id) + " already defined at line " +
                        std::to_string(other.line),
                    no);
    cores.push_back(pc);
  });

  const std::size_t end_line = std::max<std::size_t>(last_line, 1);
  if (!pmax) throw Error(ErrorKind::Syntax, "missing 'pmax' directive", end_line);
  if (cores.empty()) throw Error(ErrorKind::EmptySoc, "no 'core' lines", end_line);
  soc.p_max = *pmax;
  if (ate) soc.ate_freq = *ate;

  std::sort(cores.begin(), cores.end(),
            [](const PendingCore& a, const PendingCore& b) { return a.spec.id < b.spec.id; });
  for (std::size_t i = 0; i < cores.size(); ++i) {
    PendingCore& pc = cores[i];
    if (pc.spec.id != i + 1)
      throw Error(ErrorKind::NonContiguousCoreIds,
                  "core ids must be 1.." + std::to_string(cores.size()) + ", found core " +
                      std::to_string(pc.spec.id),
                  pc.line);
    pc.spec.f_b = pc.fb.value_or(soc.ate_freq);
    pc.spec.f_e = soc.ate_freq;
    pc.spec.ac_e = std::max<std::uint64_t>(1, pc.spec.pis + pc.spec.ppis);
    if (pc.spec.p_m > soc.p_max)
      throw Error(ErrorKind::InfeasibleCore,
                  "core " + std::to_string(pc.spec.id) + " pm " + pc.spec.p_m.str() +
                      " exceeds pmax " + soc.p_max.str(),
                  pc.line);
    soc.cores.push_back(pc.spec);
  }
  return soc;
}

std::string serialize_soc(const SocSpec& soc) {
  std::ostringstream out;
  out << "soc " << soc.name << '\n';
  out << "pmax " << soc.p_max.str() << '\n';
  out << "tam_width " << soc.tam_width << '\n';
  out << "ate_freq_mhz " << soc.ate_freq.str_mhz() << '\n';
  for (const CoreSpec& c : soc.cores) {
    out << "core " << c.id << " pm " << c.p_m.str() << " tvd " << c.t_vd.str() << " tvp "
        << c.t_vp.str() << " fb " << c.f_b.str_mhz() << " acb " << c.ac_b << " pis " << c.pis
        << " ppis " << c.ppis << '\n';
  }
  return out.str();
}

std::vector<CurveRow> parse_curve(std::string_view text) {
  std::vector<CurveRow> rows;
  bool header = false;
  std::size_t last_line = 0;
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    last_line = no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    if (!header) {
      if (line != "n_prtp,n_dtp_phase1,n_dtp_phase2")
        throw Error(ErrorKind::Syntax, "expected header 'n_prtp,n_dtp_phase1,n_dtp_phase2'", no);
      header = true;
      return;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 3)
      throw Error(ErrorKind::Syntax, "expected 3 comma-separated integers", no);
    CurveRow r{parse_uint(cells[0], "n_prtp", no), parse_uint(cells[1], "n_dtp_phase1", no),
               parse_uint(cells[2], "n_dtp_phase2", no)};
    if (!rows.empty()) {
      if (r.n_prtp <= rows.back().n_prtp)
        throw Error(ErrorKind::MonotonicityViolation, "n_prtp must strictly increase", no);
      if (r.n_dtp_phase2 > rows.back().n_dtp_phase2)
        throw Error(ErrorKind::MonotonicityViolation,
                    "n_dtp_phase2 must not increase with n_prtp", no);
    }
    rows.push_back(r);
  });
  if (!header)
    throw Error(ErrorKind::Syntax, "missing header", std::max<std::size_t>(last_line, 1));
  if (rows.empty()) throw Error(ErrorKind::Syntax, "curve has no rows", last_line);
  return rows;
}

std::string serialize_curve(const std::vector<CurveRow>& rows) {
  std::string out = "n_prtp,n_dtp_phase1,n_dtp_phase2\n";
  for (const CurveRow& r : rows)
    out += std::to_string(r.n_prtp) + "," + std::to_string(r.n_dtp_phase1) + "," +
           std::to_string(r.n_dtp_phase2) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace socbist
