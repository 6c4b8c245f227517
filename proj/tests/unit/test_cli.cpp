// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "socbist/cli.hpp"
#include "socbist/schedule_export.hpp"
#include "socbist/soc_io.hpp"
#include "test_support.hpp"

using namespace socbist;
namespace fs = std::filesystem;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

std::string fx(const char* name) { return testsupport::fixture(name); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "socbist_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("groups") {
  Out r = cli({"groups", "--soc", fx("table1.soc")});
  CHECK(r.code == 0);
  CHECK(r.out == "{1,2}\n{1,3,5}\n{1,4}\n{2,3,5}\n{3,4,5}\n");
  CHECK(r.err.empty());
  r = cli({"groups", "--soc", fx("table1.soc"), "--json"});
  CHECK(nlohmann::json::parse(r.out).size() == 5);
  r = cli({"groups", "--soc", fx("table1.soc"), "--pmax", "150"});
  CHECK(r.code == 2);
  CHECK(r.err.find("InfeasibleCore") != std::string::npos);
  CHECK(r.out.empty());
  r = cli({"groups", "--soc", fx("table1.soc"), "--pmax", "1000"});
  CHECK(r.out == "{1,2,3,4,5}\n");
}

TEST_CASE("usage and input errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  Out r = cli({"groups", "--soc", fx("table1.soc"), "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(cli({"schedule", "--soc", "missing.soc"}).code == 2);
  CHECK(cli({"faultsim", "--bench", fx("c17.bench")}).code == 2);
  CHECK(cli({"prtp-search"}).code == 2);
  CHECK(cli({"groups", "--help"}).code == 0);
}

TEST_CASE("prtp-search") {
  const std::vector<std::string> args{"prtp-search", "--bench", fx("and1.bench"), "--max", "64",
                                      "--seed", "1"};
  const Out a = cli(args), b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("coverage 100.00% (6/6)") != std::string::npos);

  const fs::path curve = scratch("c17_curve.csv");
  Out r = cli({"prtp-search", "--bench", fx("c17.bench"), "--exhaustive", "--max", "50",
               "--emit-curve", curve.string()});
  CHECK(r.code == 0);
  CHECK(parse_curve(read_file(curve.string())).size() == 51);

  const fs::path spec = scratch("core.soc");
  {
    std::ofstream f(spec);
    f << "pmax 10\ncore 1 pm 1 tvd 0 tvp 0 pis 5\n";
  }
  r = cli({"prtp-search", "--curve", curve.string(), "--core", spec.string(), "--json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("core") == 1);

  r = cli({"prtp-search", "--curve", fx("curves/core1.csv"), "--core", fx("table1.soc"),
           "--granularity", "1000"});
  CHECK(r.code == 0);
  r = cli({"prtp-search", "--curve", fx("curves/core1.csv"), "--core", fx("table1.soc")});
  CHECK(r.code == 2);  // grid points between rows
  CHECK(r.err.find("OracleRangeExceeded") != std::string::npos);
}

TEST_CASE("faultsim") {
  Out r = cli({"faultsim", "--bench", fx("and1.bench"), "--lfsr", "0,1,0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("detected 0\n") != std::string::npos);
  const fs::path pats = scratch("and.hex");
  {
    std::ofstream f(pats);
    f << "# a is bit 0\n3\n1\n2\n";
  }
  r = cli({"faultsim", "--bench", fx("and1.bench"), "--patterns", pats.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "patterns 3\nfaults 6\ndetected 6\ncoverage 100.00%\n");
  {
    std::ofstream f(pats);
    f << "7\n";
  }
  r = cli({"faultsim", "--bench", fx("and1.bench"), "--patterns", pats.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);
  r = cli({"faultsim", "--bench", fx("c17.bench"), "--lfsr", "0b1001,0,4"});
  CHECK(r.code == 2);
  r = cli({"faultsim", "--bench", fx("c17.bench"), "--lfsr", "0x12,1,31"});
  CHECK(r.code == 0);
}

TEST_CASE("schedule outputs") {
  Out r = cli({"schedule", "--soc", fx("table1.soc")});
  CHECK(r.code == 0);
  CHECK(r.out.find("total_time 1650 us") != std::string::npos);

  const fs::path json = scratch("s.json");
  r = cli({"schedule", "--soc", fx("table1.soc"), "--out", json.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const ScheduleGraph g = schedule_from_json(read_file(json.string()));
  CHECK(g.total_time == Micros::from_units(1650));
  CHECK(cli({"schedule", "--soc", fx("table1.soc"), "--json"}).out == read_file(json.string()));

  const fs::path svg = scratch("s.svg");
  CHECK(cli({"schedule", "--soc", fx("table1.soc"), "--out", svg.string()}).code == 0);
  CHECK(read_file(svg.string()).rfind("<svg", 0) == 0);
  CHECK(cli({"schedule", "--soc", fx("table1.soc"), "--out", scratch("s.png").string()}).code == 2);

  r = cli({"schedule", "--soc", fx("table1.soc"), "--augment", "--curves", fx("curves_flat")});
  CHECK(r.code == 0);
  CHECK(r.out == cli({"schedule", "--soc", fx("table1.soc")}).out);
  CHECK(cli({"schedule", "--soc", fx("table1.soc"), "--augment"}).code == 2);
}

TEST_CASE("report") {
  Out r = cli({"report", "--soc", fx("table1.soc"), "--bench", fx("c17.bench"), "--bench",
               fx("and1.bench")});
  CHECK(r.code == 0);
  CHECK(r.out.find("total_time_us 1650") != std::string::npos);
  CHECK(r.out.find("c17  5  22") != std::string::npos);
  CHECK(cli({"report"}).code == 2);
}
