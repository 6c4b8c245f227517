// SPDX-License-Identifier: Apache-2.0
#include "socbist/schedule_export.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "socbist/error.hpp"

namespace socbist {

using nlohmann::json;

namespace {

json micros_json(Micros t) {
  if (t.raw() % Micros::kScale == 0) return t.raw() / Micros::kScale;
  return t.value();
}

json parts_json(const std::vector<ActivePart>& parts) {
  json arr = json::array();
  for (const ActivePart& p : parts) arr.push_back({{"core", p.core}, {"mode", to_string(p.mode)}});
  return arr;
}

[[noreturn]] void schema(const std::string& what) {
  throw Error(ErrorKind::Syntax, "schedule.json: " + what);
}

Micros micros_from(const json& j, const char* field) {
  if (!j.is_number() || j.get<double>() < 0) schema(std::string(field) + " must be a non-negative number");
  if (j.is_number_integer()) return Micros::from_units(j.get<std::int64_t>());
  return Micros::from_raw(std::llround(j.get<double>() * Micros::kScale));
}

std::vector<ActivePart> parts_from(const json& j, const char* field) {
  if (!j.is_array()) schema(std::string(field) + " must be an array");
  std::vector<ActivePart> out;
  for (const json& e : j) {
    if (!e.is_object() || !e.contains("core") || !e.contains("mode"))
      schema(std::string(field) + " entries need core and mode");
    const std::string mode = e.at("mode").get<std::string>();
    if (mode != "BIST" && mode != "External") schema("mode must be BIST or External");
    out.push_back({e.at("core").get<CoreId>(), mode == "BIST" ? TestMode::Bist : TestMode::External});
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

}  // namespace

std::string schedule_to_json(const ScheduleGraph& graph) {
  json nodes = json::array();
  for (const ScheduleNode& n : graph.nodes) {
    nodes.push_back({{"index", n.index},
                     {"kind", to_string(n.kind)},
                     {"active", parts_json(n.active)},
                     {"duration_us", micros_json(n.duration)},
                     {"releases", parts_json(n.releases)}});
  }
  json doc = {{"nodes", nodes}, {"total_time_us", micros_json(graph.total_time)}};
  return doc.dump(2) + "\n";
}

ScheduleGraph schedule_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("total_time_us"))
    schema("expected an object with nodes and total_time_us");
  ScheduleGraph g;
  try {
    for (const json& n : doc.at("nodes")) {
      ScheduleNode node;
      node.index = n.at("index").get<std::size_t>();
      const std::string kind = n.at("kind").get<std::string>();
      if (kind != "group" && kind != "incomplete") schema("kind must be group or incomplete");
      node.kind = kind == "group" ? NodeKind::Group : NodeKind::Incomplete;
      node.active = parts_from(n.at("active"), "active");
      node.duration = micros_from(n.at("duration_us"), "duration_us");
      node.releases = parts_from(n.at("releases"), "releases");
      g.nodes.push_back(std::move(node));
    }
    g.total_time = micros_from(doc.at("total_time_us"), "total_time_us");
  } catch (const json::exception& e) {
    schema(e.what());
  }
  return g;
}

std::string schedule_to_text(const ScheduleGraph& graph) {
  std::ostringstream out;
  Micros start;
  for (const ScheduleNode& n : graph.nodes) {
    out << "node " << n.index << " [" << to_string(n.kind) << "] t=" << start.str() << " +"
        << n.duration.str() << " us:";
    for (const ActivePart& p : n.active) out << ' ' << to_string(p.mode) << '(' << p.core << ')';
    out << " | releases:";
    for (const ActivePart& p : n.releases) out << ' ' << to_string(p.mode) << '(' << p.core << ')';
    out << '\n';
    start += n.duration;
  }
  out << "total_time " << graph.total_time.str() << " us\n";
  return out.str();
}

std::string schedule_to_svg(const ScheduleGraph& graph, const SocSpec& soc) {
  constexpr double kLeft = 80, kTop = 30, kRow = 28, kBar = 18, kWidth = 720;
  const double total = std::max(graph.total_time.value(), 1e-9);
  const double scale = kWidth / total;
  const double height = kTop + kRow * static_cast<double>(soc.cores.size()) + 50;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kLeft + kWidth + 40)
      << "\" height=\"" << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<title>" << xml_escape(soc.name) << " test schedule</title>\n";
  svg << "<style>.bist{fill:#4e79a7}.external{fill:#f28e2b}</style>\n";
  for (const CoreSpec& c : soc.cores) {
    const double y = kTop + kRow * static_cast<double>(c.id - 1);
    svg << "<text x=\"8\" y=\"" << fmt(y + kBar - 4) << "\">core " << c.id << "</text>\n";
  }
  Micros start;
  for (const ScheduleNode& n : graph.nodes) {
    for (const ActivePart& p : n.active) {
      const double y = kTop + kRow * static_cast<double>(p.core - 1);
      svg << "<rect class=\"" << (p.mode == TestMode::Bist ? "bist" : "external") << "\" x=\""
          << fmt(kLeft + start.value() * scale) << "\" y=\"" << fmt(y) << "\" width=\""
          << fmt(n.duration.value() * scale) << "\" height=\"" << fmt(kBar) << "\"><title>node "
          << n.index << ' ' << to_string(p.mode) << " core " << p.core << ": " << n.duration.str()
          << " us</title></rect>\n";
    }
    start += n.duration;
  }
  const double axis_y = kTop + kRow * static_cast<double>(soc.cores.size()) + 4;
  svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(axis_y) << "\" x2=\""
      << fmt(kLeft + kWidth) << "\" y2=\"" << fmt(axis_y) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = kLeft + kWidth * i / 4.0;
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(axis_y + 16)
        << "\" text-anchor=\"middle\">" << fmt(total * i / 4.0) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kLeft) << "\" y=\"" << fmt(axis_y + 34)
      << "\">time (us); BIST = blue, External = orange</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string groups_to_json(const GroupCatalog& catalog) {
  json arr = json::array();
  for (const PowerGroup& g : catalog) arr.push_back(g.members());
  return arr.dump() + "\n";
}

}  // namespace socbist
