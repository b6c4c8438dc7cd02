#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "lk/diagram.hpp"
#include "lk/morse.hpp"

using namespace lk;

TEST_CASE("parser round trips and rejects bad words") {
  auto w = parse_front("u1 d1");
  CHECK(w.events.size() == 2);
  CHECK(serialize_front(w) == "u1 d1");

  auto t = parse_front("u1 u2 x3 x3 x3 d2 d1");
  CHECK(serialize_front(t) == "u1 u2 x3 x3 x3 d2 d1");
  CHECK(serialize_front(parse_front(serialize_front(t))) == serialize_front(t));

  CHECK_THROWS_AS(parse_front("x1"), ParseError);         // crossing needs two strands
  CHECK_THROWS_AS(parse_front("u1 x2 d1"), ParseError);   // crossing level exceeds count
  CHECK_THROWS_AS(parse_front("u1 d2"), ParseError);      // count underflow at d2
  CHECK_THROWS_AS(parse_front("q1"), ParseError);         // malformed token
  CHECK_THROWS_AS(parse_front("u1"), ParseError);         // open ends

  // R1-twisted unknot: a valid closed word
  auto r1u = parse_front("u1 x1 d1");
  CHECK(build_complex(r1u).n_components == 1);

  auto c = parse_front("cyl 2 ; x1 x1 x1");
  CHECK(c.cylinder);
  CHECK(c.seam == 2);
  CHECK(serialize_front(parse_front(serialize_front(c))) == serialize_front(c));
}

TEST_CASE("unknot census") {
  auto d = build_complex(parse_front("u1 d1"));
  CHECK(d.arcs.size() == 2);
  CHECK(d.cusps.size() == 2);
  CHECK(d.crossings.empty());
  CHECK(d.compact_region_count() == 1);
  CHECK(d.n_strands == 2);
  CHECK(d.n_components == 1);

  auto inv = classical_invariants(d);
  CHECK(inv.tb == -1);
  CHECK(inv.rot == std::vector<int>{0});
}

TEST_CASE("trefoil rainbow closure census") {
  BraidWord b{2, {1, 1, 1}};
  auto w = rainbow_closure(b);
  CHECK(serialize_front(w) == "u1 u2 x3 x3 x3 d2 d1");
  auto d = build_complex(w);
  CHECK(d.arcs.size() == 10);
  CHECK(d.n_strands == 4);
  CHECK(d.compact_region_count() == 4);
  CHECK(d.crossings.size() == 3);
  CHECK(d.n_components == 1);

  auto inv = classical_invariants(d);
  CHECK(inv.tb == 1);  // w - n = 3 - 2
  CHECK(inv.rot == std::vector<int>{0});
}

TEST_CASE("positive braid rainbow closures satisfy tb = w - n") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + (int)(rng() % 3);
    int len = 1 + (int)(rng() % 8);
    BraidWord b{n, {}};
    for (int i = 0; i < len; ++i) b.letters.push_back(1 + (int)(rng() % (n - 1)));
    auto d = build_complex(rainbow_closure(b));
    auto inv = classical_invariants(d);
    CHECK(inv.tb == len - n);
    for (int r : inv.rot) CHECK(r == 0);
  }
}

TEST_CASE("stabilized unknot has rotation +-1 and no Z potential") {
  auto d = build_complex(parse_front("u1 u2 d1 d1"));
  CHECK(d.n_components == 1);
  auto inv = classical_invariants(d);
  REQUIRE(inv.rot.size() == 1);
  CHECK(std::abs(inv.rot[0]) == 1);
  CHECK(maslov_potentials(d, 0).empty());
  CHECK_FALSE(maslov_potentials(d, 2).empty());  // 2 rot = +-2 is divisible by 2
}

TEST_CASE("maslov potentials") {
  auto un = build_complex(parse_front("u1 d1"));
  auto mu = maslov_potentials(un, 0);
  REQUIRE(mu.size() == 1);
  CHECK(mu[0].binary);

  auto tre = build_complex(rainbow_closure(BraidWord{2, {1, 1, 1}}));
  auto mt = maslov_potentials(tre, 0);
  REQUIRE(mt.size() == 1);
  CHECK(mt[0].binary);
  // zero on braid strands, one on the closure arcs
  std::multiset<int> vals(mt[0].values.begin(), mt[0].values.end());
  CHECK(vals == std::multiset<int>{0, 0, 1, 1});
}

TEST_CASE("cylinder fronts from the paper") {
  // whitehead-double pattern: 1 left + 1 right cusp, 2 crossings, 2 strands,
  // 6 arcs, 4 regions
  auto d = build_complex(parse_front("cyl 2 ; u2 x1 x3 d2"));
  CHECK(d.cusps.size() == 2);
  CHECK(d.crossings.size() == 2);
  CHECK(d.n_strands == 2);
  CHECK(d.arcs.size() == 6);
  CHECK(d.n_regions == 4);
  CHECK(d.unbounded.size() == 2);
  CHECK(d.n_components == 1);

  // cylindrical trefoil: one strand, 5 regions, 6 arcs, no cusps, 3 crossings
  auto t = build_complex(cylindrical_closure(BraidWord{2, {1, 1, 1}}));
  CHECK(t.cusps.empty());
  CHECK(t.crossings.size() == 3);
  CHECK(t.n_strands == 1);
  CHECK(t.arcs.size() == 6);
  CHECK(t.n_regions == 5);
  CHECK(t.n_components == 1);
}

TEST_CASE("hopf link fronts") {
  // horizontal: three compact regions
  auto h = build_complex(parse_front("u1 u2 x3 x1 d2 d1"));
  CHECK(h.n_components == 2);
  CHECK(h.compact_region_count() == 3);
  CHECK(h.crossings.size() == 2);
  auto mh = maslov_potentials(h, 0);
  REQUIRE(mh.size() == 1);
  CHECK(mh[0].binary);

  // vertical: stacked eyes with a clasp
  auto v = build_complex(parse_front("u1 u3 x2 x2 d1 d1"));
  CHECK(v.n_components == 2);
  CHECK(v.crossings.size() == 2);
  auto mv = maslov_potentials(v, 0);
  REQUIRE(mv.size() == 1);
  CHECK(mv[0].binary);
}

TEST_CASE("reidemeister moves preserve tb and rot") {
  std::vector<std::string> corpus = {
      "u1 d1",
      "u1 u2 x3 x3 x3 d2 d1",
      "u1 u2 x3 x1 d2 d1",
      "u1 u3 x2 x2 d1 d1",
      "u1 u2 d1 d1",
  };
  std::mt19937 rng(20240817);
  for (const auto& text : corpus) {
    MorseWord w = parse_front(text);
    auto base = classical_invariants(build_complex(w));
    std::multiset<int> base_rot(base.rot.begin(), base.rot.end());
    for (int step = 0; step < 14; ++step) {
      auto sites = applicable_moves(w, true);
      REQUIRE(!sites.empty());
      w = apply_reidemeister(w, sites[rng() % sites.size()]);
      auto inv = classical_invariants(build_complex(w));
      CHECK(inv.tb == base.tb);
      std::multiset<int> rot(inv.rot.begin(), inv.rot.end());
      CHECK(rot == base_rot);
    }
  }
}

TEST_CASE("R3 twice restores the word") {
  MorseWord w = parse_front("u1 u2 u3 x4 x5 x4 d3 d2 d1");
  MoveSite s{MoveKind::R3, true, 3, 4};
  auto w1 = apply_reidemeister(w, s);
  MoveSite back{MoveKind::R3, false, 3, 4};
  auto w2 = apply_reidemeister(w1, back);
  CHECK(serialize_front(w2) == serialize_front(w));
}

TEST_CASE("braid relation gives equal invariants downstream") {
  auto a = build_complex(cylindrical_closure(BraidWord{3, {1, 2, 1}}));
  auto b = build_complex(cylindrical_closure(BraidWord{3, {2, 1, 2}}));
  CHECK(classical_invariants(a).tb == classical_invariants(b).tb);
  CHECK(a.n_components == b.n_components);
}
