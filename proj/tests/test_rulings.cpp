#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "lk/rulings.hpp"

using namespace lk;

namespace {

std::vector<Ruling> graded_normal(const FrontDiagram& d) {
  auto mus = maslov_potentials(d, 0);
  REQUIRE(!mus.empty());
  return enumerate_rulings(d, true, mus[0], true);
}

}  // namespace

TEST_CASE("unknot has one switchless ruling") {
  auto d = build_complex(parse_front("u1 d1"));
  auto rs = graded_normal(d);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].switch_count() == 0);
  CHECK(rs[0].eye_count() == 1);
  CHECK(rs[0].euler() == 1);
  auto p = ruling_polynomial(rs);
  CHECK(p.coeff == std::map<int, long long>{{-1, 1}});
}

TEST_CASE("rainbow trefoil ruling census") {
  auto d = build_complex(rainbow_closure(BraidWord{2, {1, 1, 1}}));
  auto rs = graded_normal(d);
  REQUIRE(rs.size() == 3);
  std::multiset<int> counts;
  for (const auto& r : rs) counts.insert(r.switch_count());
  CHECK(counts == std::multiset<int>{1, 1, 3});
  // the two one-switch rulings use the outer crossings, never the middle one
  for (const auto& r : rs) {
    if (r.switch_count() == 1) CHECK(r.switches[0] != 1);
    CHECK(r.euler() == 2 - r.switch_count());
  }
  auto p = ruling_polynomial(rs);
  CHECK(p.coeff == std::map<int, long long>{{-1, 2}, {1, 1}});
}

TEST_CASE("two-eye unlink") {
  auto d = build_complex(rainbow_closure(BraidWord{2, {}}));
  auto rs = graded_normal(d);
  REQUIRE(rs.size() == 1);
  CHECK(ruling_polynomial(rs).coeff == std::map<int, long long>{{-2, 1}});
}

TEST_CASE("eyes partition the arcs and paths avoid interior cusps") {
  for (const char* txt : {"u1 u2 x3 x3 x3 d2 d1", "u1 u2 x3 x1 d2 d1", "u1 u3 x2 x2 d1 d1",
                          "u1 x1 d1", "u1 u2 x3 x3 x3 x3 x3 d2 d1"}) {
    auto d = build_complex(parse_front(txt));
    auto mus = maslov_potentials(d, 0);
    auto rs = enumerate_rulings(d, false, mus.empty() ? MaslovPotential{} : mus[0], false);
    for (const auto& r : rs) {
      std::set<int> covered;
      for (const auto& e : r.eyes) {
        for (int a : e.upper) covered.insert(a);
        for (int a : e.lower) covered.insert(a);
      }
      CHECK(covered.size() == d.arcs.size());
      for (int a = 0; a < (int)d.arcs.size(); ++a) CHECK(r.eye_of_arc[a] >= 0);
      CHECK(r.eye_count() == (int)d.cusps.size() / 2);
    }
  }
}

TEST_CASE("cylinder fronts are rejected") {
  auto d = build_complex(parse_front("cyl 2 ; x1 x1 x1"));
  CHECK_THROWS_AS(enumerate_rulings(d, false, MaslovPotential{}, false), ParseError);
}

TEST_CASE("graded normal ruling count is a reidemeister invariant") {
  std::mt19937 rng(99);
  for (const char* txt : {"u1 d1", "u1 u2 x3 x3 x3 d2 d1", "u1 u2 x3 x1 d2 d1"}) {
    MorseWord w = parse_front(txt);
    auto base = ruling_polynomial(graded_normal(build_complex(w)));
    for (int step = 0; step < 12; ++step) {
      auto sites = applicable_moves(w, true);
      REQUIRE(!sites.empty());
      w = apply_reidemeister(w, sites[rng() % sites.size()]);
      auto p = ruling_polynomial(graded_normal(build_complex(w)));
      CHECK(p == base);
    }
  }
}
