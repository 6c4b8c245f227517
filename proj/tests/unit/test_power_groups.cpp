// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "socbist/error.hpp"
#include "socbist/power_groups.hpp"
#include "socbist/soc_io.hpp"
#include "test_support.hpp"

using namespace socbist;

namespace {

SocSpec table1() { return parse_soc(read_file(testsupport::fixture("table1.soc"))); }

std::vector<std::vector<CoreId>> as_lists(const GroupCatalog& c) {
  std::vector<std::vector<CoreId>> out;
  for (const auto& g : c) out.push_back(g.members());
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Stuck;
}

}  // namespace

TEST_CASE("PowerGroup canonical form") {
  const PowerGroup g({5, 1, 3, 3});
  CHECK(g.members() == std::vector<CoreId>{1, 3, 5});
  CHECK(g.str() == "{1,3,5}");
  CHECK(g.contains(3));
  CHECK_FALSE(g.contains(2));
  CHECK(PowerGroup().str() == "{}");
  CHECK(g.power(table1()) == Power::from_units(200));
}

TEST_CASE("five-core catalog") {
  const SocSpec soc = table1();
  const auto expected = std::vector<std::vector<CoreId>>{{1, 2}, {1, 3, 5}, {1, 4}, {2, 3, 5}, {3, 4, 5}};
  CHECK(as_lists(enumerate_groups(soc)) == expected);
  CHECK(as_lists(enumerate_groups_serial(soc)) == expected);
}

TEST_CASE("singleton and pairwise-exclusive SoCs") {
  SocSpec soc = table1();
  soc.cores.resize(1);
  soc.cores[0].p_m = Power::from_units(50);
  CHECK(as_lists(enumerate_groups(soc)) == std::vector<std::vector<CoreId>>{{1}});

  soc = table1();
  soc.cores.resize(2);
  soc.cores[0].p_m = soc.cores[1].p_m = Power::from_units(200);
  CHECK(as_lists(enumerate_groups(soc)) == std::vector<std::vector<CoreId>>{{1}, {2}});
}

TEST_CASE("enumeration matches brute force on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const SocSpec soc = testsupport::random_soc(rng, 1 + rng() % 10);
    const auto par = enumerate_groups(soc);
    CHECK(as_lists(par) == testsupport::brute_force_groups(soc));
    CHECK(par == enumerate_groups_serial(soc));
    for (const PowerGroup& g : par) {
      CHECK(g.power(soc) <= soc.p_max);
      CHECK_FALSE(is_incomplete(g, soc));
    }
  }
}

TEST_CASE("enumeration errors") {
  SocSpec soc = table1();
  soc.p_max = Power::from_units(150);
  CHECK(kind_of([&] { enumerate_groups(soc); }) == ErrorKind::InfeasibleCore);
  soc.cores.clear();
  CHECK(kind_of([&] { enumerate_groups(soc); }) == ErrorKind::EmptySoc);
  CHECK(kind_of([&] { enumerate_groups(table1(), 3); }) == ErrorKind::CatalogTooLarge);
  CHECK(kind_of([&] { enumerate_groups_serial(table1(), 3); }) == ErrorKind::CatalogTooLarge);
  CHECK(enumerate_groups(table1(), 5).size() == 5);
}

TEST_CASE("incomplete sets") {
  const SocSpec soc = table1();
  CHECK(is_incomplete(PowerGroup({3, 5}), soc));
  CHECK_FALSE(is_incomplete(PowerGroup({1, 2}), soc));
  CHECK(is_incomplete(PowerGroup(), soc));
  CHECK(kind_of([&] { is_incomplete(PowerGroup({2, 4}), soc); }) == ErrorKind::InfeasibleSet);
}
