#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lk/homfly.hpp"

using namespace lk;

namespace {

LaurentAQ golden_trefoil() {
  // hand skein resolution of s1^3, recorded before the Hecke build:
  // P = (-a^5 + (3+d^2) a^3 - (2+d^2) a) / d
  LaurentAQ p;
  p.add_term(5, -1, BigInt(-1));
  p.add_term(3, -1, BigInt(3));
  p.add_term(3, 1, BigInt(1));
  p.add_term(1, -1, BigInt(-2));
  p.add_term(1, 1, BigInt(-1));
  return p;
}

std::vector<Ruling> graded_normal_rainbow(const BraidWord& b) {
  auto d = build_complex(rainbow_closure(b));
  auto mus = maslov_potentials(d, 0);
  REQUIRE(!mus.empty());
  return enumerate_rulings(d, true, mus[0], true);
}

BraidWord random_braid(std::mt19937& rng, int max_strands = 4, int max_len = 7,
                       bool positive = false) {
  int n = 2 + (int)(rng() % (max_strands - 1));
  int len = 1 + (int)(rng() % max_len);
  BraidWord b{n, {}};
  for (int i = 0; i < len; ++i) {
    int g = 1 + (int)(rng() % (n - 1));
    if (!positive && rng() % 2) g = -g;
    b.letters.push_back(g);
  }
  return b;
}

}  // namespace

TEST_CASE("unknot and unlink normalization") {
  CHECK(homfly(BraidWord{1, {}}) == LaurentAQ::unknot());
  CHECK(homfly(BraidWord{2, {}}) == LaurentAQ::unknot() * LaurentAQ::unknot());
  CHECK(homfly(BraidWord{2, {1}}) == LaurentAQ::unknot());
  CHECK(homfly(BraidWord{2, {-1}}) == LaurentAQ::unknot());
  CHECK(homfly(BraidWord{3, {}}) ==
        LaurentAQ::unknot() * LaurentAQ::unknot() * LaurentAQ::unknot());
}

TEST_CASE("trefoil matches the frozen golden value") {
  CHECK(homfly(BraidWord{2, {1, 1, 1}}) == golden_trefoil());
}

TEST_CASE("hecke route agrees with the diagram skein route") {
  std::mt19937 rng(5);
  for (int t = 0; t < 25; ++t) {
    auto b = random_braid(rng);
    CHECK(homfly(b) == homfly_skein(b));
  }
}

TEST_CASE("skein relation holds exactly") {
  std::mt19937 rng(11);
  LaurentAQ d = LaurentAQ::mono(0, 1, 1);
  LaurentAQ a = LaurentAQ::mono(1, 0, 1);
  LaurentAQ ainv = LaurentAQ::mono(-1, 0, 1);
  for (int t = 0; t < 25; ++t) {
    auto b = random_braid(rng);
    int k = (int)(rng() % b.letters.size());
    if (b.letters[k] < 0) b.letters[k] = -b.letters[k];
    BraidWord neg = b, del = b;
    neg.letters[k] = -neg.letters[k];
    del.letters.erase(del.letters.begin() + k);
    CHECK(a * homfly(neg) - ainv * homfly(b) == d * homfly(del));
  }
}

TEST_CASE("markov invariance: conjugation and stabilization") {
  std::mt19937 rng(13);
  for (int t = 0; t < 20; ++t) {
    auto b = random_braid(rng);
    BraidWord rot = b;
    std::rotate(rot.letters.begin(), rot.letters.begin() + 1, rot.letters.end());
    CHECK(homfly(b) == homfly(rot));

    BraidWord stab = b;
    stab.strands++;
    stab.letters.push_back(b.strands);
    CHECK(homfly(b) == homfly(stab));
    stab.letters.back() = -stab.letters.back();
    CHECK(homfly(b) == homfly(stab));
  }
}

TEST_CASE("lowest a-coefficient of the trefoil") {
  auto P = homfly(BraidWord{2, {1, 1, 1}});
  auto c = lowest_a_coefficient(P, 2, 3);
  // (q^2 + 1)/(q - 1)
  QRat want;
  want.num[2] = BigInt(1);
  want.num[0] = BigInt(1);
  want.denpow = 1;
  CHECK(c == want);
  CHECK(c.eval_q(2) == Rational(5));

  // theorem-convention differs by the sign (-1)^{n-w}
  auto ct = lowest_a_coefficient(P, 2, 3, SignConvention::Theorem);
  QRat mwant = QRat{} - want;
  CHECK(ct == mwant);
}

TEST_CASE("unknot lowest a-coefficient is 1/(q-1)") {
  auto c = lowest_a_coefficient(homfly(BraidWord{1, {}}), 1, 0);
  QRat want;
  want.num[0] = BigInt(1);
  want.denpow = 1;
  CHECK(c == want);
}

TEST_CASE("rutherford sum reproduces hand evaluations") {
  // trefoil: 2q/(q-1) + (q-1) = (q^2+1)/(q-1), from switch counts {1,1,3}
  auto rs = graded_normal_rainbow(BraidWord{2, {1, 1, 1}});
  auto r = rutherford_sum(rs, 3, 2);
  QRat want;
  want.num[2] = BigInt(1);
  want.num[0] = BigInt(1);
  want.denpow = 1;
  CHECK(r == want);

  // unknot: 1/(q-1)
  auto ru = rutherford_sum(graded_normal_rainbow(BraidWord{1, {}}), 0, 1);
  QRat wu;
  wu.num[0] = BigInt(1);
  wu.denpow = 1;
  CHECK(ru == wu);

  // two-eye unlink: 1/(q-1)^2
  auto r2 = rutherford_sum(graded_normal_rainbow(BraidWord{2, {}}), 0, 2);
  QRat w2;
  w2.num[0] = BigInt(1);
  w2.denpow = 2;
  CHECK(r2 == w2);
}

TEST_CASE("three-way identity: lowest-a equals the ruling sum") {
  std::vector<BraidWord> corpus = {
      {1, {}}, {2, {1, 1}}, {2, {1, 1, 1}}, {2, {1, 1, 1, 1, 1}},
      {3, {1, 2, 1, 2, 1, 2, 1, 2}}, {3, {1, 1, 2, 2}}, {3, {2, 1, 2, 1}},
  };
  for (const auto& b : corpus) {
    int w = (int)b.letters.size(), n = b.strands;
    auto low = lowest_a_coefficient(homfly(b), n, w);
    auto ruth = rutherford_sum(graded_normal_rainbow(b), w, n);
    CHECK(low == ruth);
  }
}
