// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include <json.hpp>

#include "socbist/error.hpp"
#include "socbist/schedule_export.hpp"
#include "socbist/soc_io.hpp"
#include "test_support.hpp"

using namespace socbist;

namespace {

struct Caught {
  ErrorKind kind = ErrorKind::Stuck;
  std::size_t line = 0;
};

template <class F>
Caught catch_error(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.kind(), e.line()};
  }
  return {};
}

const char* kHead = "soc t\npmax 300\n";

}  // namespace

TEST_CASE("five-core fixture") {
  const SocSpec soc = parse_soc(read_file(testsupport::fixture("table1.soc")));
  CHECK(soc.name == "table1");
  CHECK(soc.p_max == Power::from_units(300));
  REQUIRE(soc.cores.size() == 5);
  const int pm[] = {100, 200, 50, 200, 50}, tvd[] = {300, 400, 500, 150, 100},
            tvp[] = {200, 500, 200, 600, 300};
  for (int i = 0; i < 5; ++i) {
    CHECK(soc.cores[i].id == static_cast<CoreId>(i + 1));
    CHECK(soc.cores[i].p_m == Power::from_units(pm[i]));
    CHECK(soc.cores[i].t_vd == Micros::from_units(tvd[i]));
    CHECK(soc.cores[i].t_vp == Micros::from_units(tvp[i]));
    CHECK(soc.cores[i].f_b == Frequency::from_mhz(100));
    CHECK(soc.cores[i].ac_b == 1);
  }
}

TEST_CASE("SoC defaults and optional keys") {
  const SocSpec soc = parse_soc(
      "# comment\nsoc x\npmax 10.5\ntam_width 8\nate_freq_mhz 50\n"
      "core 1 tvp 1.25 pm 2 tvd 3 fb 200 acb 2 pis 4 ppis 6  # trailing\n"
      "core 2 pm 1 tvd 0 tvp 0\n");
  CHECK(soc.p_max.raw() == 1050);
  CHECK(soc.tam_width == 8);
  CHECK(soc.ate_freq == Frequency::from_mhz(50));
  const CoreSpec& a = soc.core(1);
  CHECK(a.t_vp.raw() == 125);
  CHECK(a.f_b == Frequency::from_mhz(200));
  CHECK(a.ac_b == 2);
  CHECK(a.f_e == Frequency::from_mhz(50));
  CHECK(a.ac_e == 10);
  CHECK(soc.core(2).f_b == Frequency::from_mhz(50));
  CHECK(soc.core(2).ac_e == 1);
}

TEST_CASE("SoC errors") {
  auto parse = [](std::string text) { return catch_error([&] { parse_soc(text); }); };
  CHECK(parse(kHead).kind == ErrorKind::EmptySoc);
  Caught c = parse(std::string(kHead) + "core 1 pm 1 tvd 1 tvp 1\ncore 1 pm 1 tvd 1 tvp 1\n");
  CHECK(c.kind == ErrorKind::DuplicateCoreId);
  CHECK(c.line == 4);
  c = parse(std::string(kHead) + "core 1 pm 1 tvd 1 tvp 1\ncore 2 pm 301 tvd 1 tvp 1\n");
  CHECK(c.kind == ErrorKind::InfeasibleCore);
  CHECK(c.line == 4);
  CHECK(parse(std::string(kHead) + "core 2 pm 1 tvd 1 tvp 1\n").kind ==
        ErrorKind::NonContiguousCoreIds);
  c = parse(std::string(kHead) + "core 1 pm 1 tvd 1.234 tvp 1\n");
  CHECK(c.kind == ErrorKind::Syntax);
  CHECK(c.line == 3);
  CHECK(parse(std::string(kHead) + "core 1 pm 1 tvd 1\n").kind == ErrorKind::Syntax);
  CHECK(parse(std::string(kHead) + "core 1 pm 1 tvd 1 tvp 1 bogus 2\n").kind == ErrorKind::Syntax);
  CHECK(parse(std::string(kHead) + "core 1 pm 1 pm 2 tvd 1 tvp 1\n").kind == ErrorKind::Syntax);
  CHECK(parse(std::string(kHead) + "core 1 pm -1 tvd 1 tvp 1\n").kind == ErrorKind::Syntax);
  CHECK(parse("soc t\ncore 1 pm 1 tvd 1 tvp 1\n").kind == ErrorKind::Syntax);
  c = parse(std::string(kHead) + "frobnicate 3\n");
  CHECK(c.kind == ErrorKind::Syntax);
  CHECK(c.line == 3);
}

TEST_CASE("SoC round trip") {
  const SocSpec t1 = parse_soc(read_file(testsupport::fixture("table1.soc")));
  CHECK(parse_soc(serialize_soc(t1)) == t1);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    SocSpec soc = testsupport::random_soc(rng, 1 + rng() % 10);
    for (auto& c : soc.cores) {
      c.t_vd = Micros::from_raw(static_cast<std::int64_t>(rng() % 100000));
      c.ac_b = 1 + rng() % 4;
      c.pis = rng() % 40;
      c.ppis = rng() % 40;
      c.ac_e = std::max<std::uint64_t>(1, c.pis + c.ppis);
    }
    CHECK(parse_soc(serialize_soc(soc)) == soc);
  }
}

TEST_CASE("curve parsing") {
  const auto rows = parse_curve("n_prtp,n_dtp_phase1,n_dtp_phase2\n0,5,100\n1000,5,20\n");
  CHECK(rows == std::vector<CurveRow>{{0, 5, 100}, {1000, 5, 20}});
  CHECK(parse_curve(serialize_curve(rows)) == rows);

  auto parse = [](std::string text) { return catch_error([&] { parse_curve(text); }); };
  Caught c = parse("n_prtp,n_dtp_phase1,n_dtp_phase2\n100,0,5\n50,0,4\n");
  CHECK(c.kind == ErrorKind::MonotonicityViolation);
  CHECK(c.line == 3);
  c = parse("n_prtp,n_dtp_phase1,n_dtp_phase2\n0,0,5\n10,0,6\n");
  CHECK(c.kind == ErrorKind::MonotonicityViolation);
  CHECK(c.line == 3);
  c = parse("n_prtp,n_dtp_phase1,n_dtp_phase2\n0,0,5\n10,x,4\n");
  CHECK(c.kind == ErrorKind::Syntax);
  CHECK(c.line == 3);
  CHECK(parse("n_prtp,n_dtp\n0,0\n").kind == ErrorKind::Syntax);
  CHECK(parse("n_prtp,n_dtp_phase1,n_dtp_phase2\n1,2\n").kind == ErrorKind::Syntax);
  CHECK(parse("n_prtp,n_dtp_phase1,n_dtp_phase2\n").kind == ErrorKind::Syntax);
}

TEST_CASE("curve fixtures are consistent with the five-core SoC") {
  for (const char* dir : {"curves", "curves_flat"})
    for (int id = 1; id <= 5; ++id) {
      const auto rows =
          parse_curve(read_file(testsupport::fixture(std::string(dir) + "/core" +
                                                     std::to_string(id) + ".csv")));
      CHECK(rows.size() == 101);
    }
}

TEST_CASE("schedule.json round trip and schema") {
  const SocSpec soc = parse_soc(read_file(testsupport::fixture("table1.soc")));
  const ScheduleGraph g = build_schedule(soc, enumerate_groups(soc));
  const std::string text = schedule_to_json(g);
  CHECK(schedule_from_json(text) == g);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("total_time_us") == 1650);
  const auto& n = doc.at("nodes").at(0);
  for (const char* key : {"index", "kind", "active", "duration_us", "releases"})
    CHECK(n.contains(key));
  CHECK(n.size() == 5);
  CHECK(n.at("active").at(0).at("mode") == "External");

  ScheduleGraph frac = g;
  frac.nodes[0].duration = Micros::from_raw(12345);
  frac.total_time = total_time(frac);
  CHECK(schedule_from_json(schedule_to_json(frac)) == frac);

  CHECK_THROWS_AS(schedule_from_json("{"), Error);
  CHECK_THROWS_AS(schedule_from_json("{\"nodes\":[]}"), Error);
  CHECK_THROWS_AS(
      schedule_from_json(R"({"nodes":[{"index":1,"kind":"x","active":[],"duration_us":1,"releases":[]}],"total_time_us":1})"),
      Error);
}

TEST_CASE("gantt svg and text") {
  const SocSpec soc = parse_soc(read_file(testsupport::fixture("table1.soc")));
  const ScheduleGraph g = build_schedule(soc, enumerate_groups(soc));
  const std::string svg = schedule_to_svg(g, soc);
  std::size_t bist = 0, ext = 0, parts = 0;
  for (std::size_t p = 0; (p = svg.find("class=\"bist\"", p)) != std::string::npos; ++p) ++bist;
  for (std::size_t p = 0; (p = svg.find("class=\"external\"", p)) != std::string::npos; ++p) ++ext;
  for (const auto& n : g.nodes) parts += n.active.size();
  CHECK(bist + ext == parts);
  CHECK(ext == g.nodes.size() - 2);  // two BIST-only nodes
  CHECK(svg.find(".bist{fill:") != std::string::npos);
  CHECK(svg.find(".external{fill:") != std::string::npos);
  for (int id = 1; id <= 5; ++id) CHECK(svg.find(">core " + std::to_string(id) + "<") != std::string::npos);

  const std::string text = schedule_to_text(g);
  CHECK(text.find("total_time 1650 us") != std::string::npos);
  CHECK(groups_to_json(enumerate_groups(soc)) == "[[1,2],[1,3,5],[1,4],[2,3,5],[3,4,5]]\n");
}
