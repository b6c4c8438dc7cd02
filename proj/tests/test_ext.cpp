#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lk/pixel.hpp"
#include "lk/posetext.hpp"

using namespace lk;

namespace {

struct Setup {
  FrontDiagram d;
  QuiverModel m;
  ModuliResult objs;
};

Setup setup_front(const MorseWord& w, int p) {
  Setup s;
  s.d = build_complex(w);
  auto mus = maslov_potentials(s.d, 0);
  REQUIRE(!mus.empty());
  REQUIRE(mus[0].binary);
  s.m = build_quiver_model(s.d, mus[0], 1);
  FqField F(p);
  s.objs = enumerate_objects(s.m, F);
  return s;
}

}  // namespace

TEST_CASE("unknot: eye sheaf pixelation and End dims") {
  auto s = setup_front(parse_front("u1 d1"), 2);
  REQUIRE(s.objs.classes.size() == 1);
  FqField F(2);
  auto M = pixelate(s.m, F, s.objs.classes[0]);
  // constant sheaf on a rectangle: one square column per event interval
  CHECK(M.total_dim() >= 1);
  auto e = koszul_ext(F, M, M);
  CHECK(e == ExtDims{1, 0, 0});

  auto rc = refine(s.d);
  auto Fm = poset_module(rc, s.m, F, s.objs.classes[0]);
  auto h = poset_ext(rc, F, Fm, Fm);
  REQUIRE(h.size() >= 3);
  CHECK(h[0] == 1);
  CHECK(h[1] == 0);
  CHECK(h[2] == 0);
}

TEST_CASE("horizontal hopf pixelation matches the eight dimensional module") {
  auto s = setup_front(parse_front("u1 u2 x3 x1 d2 d1"), 2);
  REQUIRE(s.objs.classes.size() == 3);
  FqField F(2);
  for (const auto& o : s.objs.classes) {
    auto M = pixelate(s.m, F, o);
    CHECK(M.total_dim() == 8);
    std::multiset<int> dims;
    for (auto& [k, v] : M.dim) dims.insert(v);
    CHECK(dims == std::multiset<int>{1, 1, 1, 1, 1, 1, 2});
  }
}

TEST_CASE("trefoil ext table both routes") {
  auto s = setup_front(rainbow_closure(BraidWord{2, {1, 1, 1}}), 2);
  REQUIRE(s.objs.classes.size() == 5);
  FqField F(2);
  auto rc = refine(s.d);
  std::vector<BigradedModule> mods;
  std::vector<PosetModule> pmods;
  for (const auto& o : s.objs.classes) {
    mods.push_back(pixelate(s.m, F, o));
    pmods.push_back(poset_module(rc, s.m, F, o));
  }
  for (size_t i = 0; i < mods.size(); ++i)
    for (size_t j = 0; j < mods.size(); ++j) {
      auto e = koszul_ext(F, mods[i], mods[j]);
      ExtDims want = i == j ? ExtDims{1, 2, 0} : ExtDims{0, 1, 0};
      CHECK(e == want);
      CHECK(e.h0 - e.h1 + e.h2 == koszul_euler(mods[i], mods[j]));

      auto h = poset_ext(rc, F, pmods[i], pmods[j]);
      REQUIRE(h.size() >= 3);
      CHECK(h[0] == want.h0);
      CHECK(h[1] == want.h1);
      CHECK(h[2] == want.h2);
      for (size_t k = 3; k < h.size(); ++k) CHECK(h[k] == 0);
    }
}

TEST_CASE("hopf and unlink ext sanity") {
  FqField F(2);
  for (const char* txt : {"u1 u2 x3 x1 d2 d1", "u1 u2 d2 d1"}) {
    auto s = setup_front(parse_front(txt), 2);
    auto rc = refine(s.d);
    for (const auto& o : s.objs.classes) {
      auto M = pixelate(s.m, F, o);
      auto e = koszul_ext(F, M, M);
      CHECK(e.h0 >= 1);  // the identity endomorphism
      auto h = poset_ext(rc, F, poset_module(rc, s.m, F, o), poset_module(rc, s.m, F, o));
      CHECK(h[0] == e.h0);
      CHECK(h[1] == e.h1);
      CHECK(h[2] == e.h2);
    }
  }
}
