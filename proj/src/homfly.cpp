#include "lk/homfly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lk {

std::string LaurentAQ::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : terms) {
    if (!first && !c.is_negative()) out << "+";
    first = false;
    out << c.to_string();
    if (k.first) out << "*a^" << k.first;
    if (k.second) out << "*d^" << k.second;
  }
  return out.str();
}

void QRat::normalize() {
  for (auto it = num.begin(); it != num.end();) {
    if (it->second.is_zero()) it = num.erase(it);
    else ++it;
  }
  if (num.empty()) { denpow = 0; return; }
  while (denpow > 0) {
    BigInt at1;
    for (auto& [e, c] : num) at1 += c;
    if (!at1.is_zero()) break;
    int lo = num.begin()->first, hi = num.rbegin()->first;
    std::vector<BigInt> coef(hi - lo + 1);
    for (auto& [e, c] : num) coef[e - lo] = c;
    std::vector<BigInt> quot(coef.size() - 1);
    BigInt carry;
    for (int i = (int)coef.size() - 1; i >= 1; --i) {
      carry += coef[i];
      quot[i - 1] = carry;
    }
    num.clear();
    for (int i = 0; i < (int)quot.size(); ++i)
      if (!quot[i].is_zero()) num[lo + i] = quot[i];
    --denpow;
  }
}

QRat operator+(const QRat& x, const QRat& y) {
  QRat r;
  r.denpow = std::max(x.denpow, y.denpow);
  auto lift = [&](const QRat& s) {
    std::map<int, BigInt> acc = s.num;
    for (int k = s.denpow; k < r.denpow; ++k) {
      std::map<int, BigInt> nx;
      for (auto& [e, c] : acc) {
        nx[e + 1] += c;
        nx[e] += -c;
      }
      acc = std::move(nx);
    }
    for (auto& [e, c] : acc) r.num[e] += c;
  };
  lift(x);
  lift(y);
  r.normalize();
  return r;
}

QRat operator-(const QRat& x, const QRat& y) {
  QRat ny = y;
  for (auto& [e, c] : ny.num) c = -c;
  return x + ny;
}

QRat operator*(const QRat& x, const QRat& y) {
  QRat r;
  r.denpow = x.denpow + y.denpow;
  for (auto& [ex, cx] : x.num)
    for (auto& [ey, cy] : y.num) r.num[ex + ey] += cx * cy;
  r.normalize();
  return r;
}

bool QRat::operator==(const QRat& o) const {
  QRat d = *this - o;
  return d.num.empty();
}

Rational QRat::eval_q(long long q) const {
  Rational n(0);
  for (auto& [e, c] : num) {
    Rational p(1);
    for (int i = 0; i < std::abs(e); ++i) p = p * Rational(q);
    if (e < 0) p = Rational(1) / p;
    n += Rational(c, BigInt(1)) * p;
  }
  Rational d(1);
  for (int i = 0; i < denpow; ++i) d = d * Rational(q - 1);
  return n / d;
}

std::string QRat::to_string() const {
  if (num.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  out << "(";
  for (auto& [e, c] : num) {
    if (!first && !c.is_negative()) out << "+";
    first = false;
    out << c.to_string();
    if (e) out << "q^" << e;
  }
  out << ")";
  if (denpow) out << "/(q-1)^" << denpow;
  return out.str();
}

namespace {

using Perm = std::vector<int>;

// Hecke coefficients: polynomials in the trace parameter z and in d.
struct PolyZD {
  std::map<std::pair<int, int>, BigInt> t;
  void add(int ze, int de, const BigInt& c) {
    if (c.is_zero()) return;
    auto& v = t[{ze, de}];
    v += c;
    if (v.is_zero()) t.erase({ze, de});
  }
  bool zero() const { return t.empty(); }
};

PolyZD pzd_mul(const PolyZD& x, const PolyZD& y) {
  PolyZD r;
  for (auto& [kx, cx] : x.t)
    for (auto& [ky, cy] : y.t) r.add(kx.first + ky.first, kx.second + ky.second, cx * cy);
  return r;
}

PolyZD pzd_one() {
  PolyZD r;
  r.add(0, 0, BigInt(1));
  return r;
}

using Elt = std::map<Perm, PolyZD>;

void elt_add(Elt& x, const Perm& w, const PolyZD& c) {
  if (c.zero()) return;
  auto it = x.find(w);
  if (it == x.end()) {
    x[w] = c;
    return;
  }
  for (auto& [k, v] : c.t) it->second.add(k.first, k.second, v);
  if (it->second.zero()) x.erase(it);
}

// Right multiplication by g_i^{+-1}, from g_i^2 = 1 + d g_i.
Elt elt_mul_gen(const Elt& x, int i, bool inverse) {
  Elt r;
  for (auto& [w, c] : x) {
    Perm ws = w;
    std::swap(ws[i], ws[i + 1]);
    bool longer = w[i] < w[i + 1];
    elt_add(r, ws, c);
    if ((longer && inverse) || (!longer && !inverse)) {
      PolyZD cd;
      for (auto& [k, v] : c.t) cd.add(k.first, k.second + 1, inverse ? -v : v);
      elt_add(r, w, cd);
    }
  }
  return r;
}

struct TraceCalc {
  std::map<Perm, PolyZD> memo;

  // Ocneanu trace of T_w, normalized by tr(1) = 1 at every rank.
  PolyZD trace(const Perm& w) {
    int m = (int)w.size();
    if (m <= 1) return pzd_one();
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    PolyZD result;
    if (w[m - 1] == m - 1) {
      Perm sub(w.begin(), w.end() - 1);
      result = trace(sub);
    } else {
      // staircase factorization w = w' s_{m-2} ... s_j, j = w^{-1}(m-1)
      int j = 0;
      while (w[j] != m - 1) ++j;
      Perm wp = w;
      for (int k = j; k <= m - 2; ++k) std::swap(wp[k], wp[k + 1]);
      Perm sub(wp.begin(), wp.end() - 1);
      Elt x;
      x[sub] = pzd_one();
      for (int k = m - 3; k >= j; --k) x = elt_mul_gen(x, k, false);
      PolyZD acc;
      for (auto& [v, c] : x) {
        PolyZD prod = pzd_mul(c, trace(v));
        for (auto& [k, vv] : prod.t) acc.add(k.first, k.second, vv);
      }
      for (auto& [k, vv] : acc.t) result.add(k.first + 1, k.second, vv);
    }
    memo[w] = result;
    return result;
  }
};

Perm braid_permutation(const BraidWord& b) {
  Perm p(b.strands);
  std::iota(p.begin(), p.end(), 0);
  for (int l : b.letters) std::swap(p[std::abs(l) - 1], p[std::abs(l)]);
  return p;
}

LaurentAQ scaled(const LaurentAQ& x, const BigInt& c) {
  LaurentAQ r;
  for (auto& [k, v] : x.terms) r.add_term(k.first, k.second, v * c);
  return r;
}

}  // namespace

int closure_components(const BraidWord& b) {
  Perm p = braid_permutation(b);
  std::vector<char> seen(p.size(), 0);
  int c = 0;
  for (int i = 0; i < (int)p.size(); ++i) {
    if (seen[i]) continue;
    ++c;
    for (int j = i; !seen[j]; j = p[j]) seen[j] = 1;
  }
  return c;
}

LaurentAQ homfly(const BraidWord& b) {
  int n = b.strands;
  Elt x;
  Perm id(n);
  std::iota(id.begin(), id.end(), 0);
  x[id] = pzd_one();
  for (int l : b.letters) x = elt_mul_gen(x, std::abs(l) - 1, l < 0);

  TraceCalc tc;
  PolyZD tr;
  for (auto& [w, c] : x) {
    PolyZD prod = pzd_mul(c, tc.trace(w));
    for (auto& [k, v] : prod.t) tr.add(k.first, k.second, v);
  }

  // P = (-1)^{c+n} a^e U^n tr|_{z -> -a^{-1}/U}, U = (a - a^{-1})/d, so the
  // z^k term contributes (-1)^k a^{e-k} (a-a^{-1})^{n-k} d^{k-n}.
  int e = b.writhe();
  int c = closure_components(b);
  long long sign = ((c + n) % 2 == 0) ? 1 : -1;
  LaurentAQ am;
  am.add_term(1, 0, BigInt(1));
  am.add_term(-1, 0, BigInt(-1));
  LaurentAQ P;
  for (auto& [k, coeff] : tr.t) {
    auto [ze, de] = k;
    LaurentAQ t = LaurentAQ::mono(e - ze, de + ze - n, (ze % 2 == 0 ? 1 : -1) * sign);
    for (int i = 0; i < n - ze; ++i) t = t * am;
    P = P + scaled(t, coeff);
  }
  return P;
}

namespace {

// Diagram-level skein: resolve toward descending diagrams relative to a
// fixed traversal order. Status per crossing: '0' as written, '1' switched,
// '2' smoothed.
struct SkeinDiagram {
  const BraidWord& b;
  std::map<std::string, LaurentAQ> memo;

  explicit SkeinDiagram(const BraidWord& bw) : b(bw) {}

  LaurentAQ unlink(int c) {
    LaurentAQ r = LaurentAQ::mono(0, 0, 1);
    for (int i = 0; i < c; ++i) r = r * LaurentAQ::unknot();
    return r;
  }

  LaurentAQ eval(const std::string& st) {
    auto it = memo.find(st);
    if (it != memo.end()) return it->second;
    int w = (int)b.letters.size();
    int n = b.strands;

    // walk components in order of least starting slot at the closure seam
    int bad = -1;
    bool bad_positive = false;
    std::vector<char> comp_seen(n, 0);
    std::vector<char> pass_seen(w, 0);
    for (int start = 0; start < n && bad < 0; ++start) {
      if (comp_seen[start]) continue;
      int s = start;
      do {
        comp_seen[s] = 1;
        for (int k = 0; k < w; ++k) {
          int i = std::abs(b.letters[k]) - 1;
          if (st[k] == '2' || (s != i && s != i + 1)) continue;
          bool positive = (b.letters[k] > 0) != (st[k] == '1');
          bool under = positive ? (s == i) : (s == i + 1);
          if (!pass_seen[k]) {
            if (under) {
              bad = k;
              bad_positive = positive;
              break;
            }
            pass_seen[k] = 1;
          }
          s = (s == i) ? i + 1 : i;
        }
        if (bad >= 0) break;
      } while (s != start);
    }

    LaurentAQ result;
    if (bad < 0) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (int k = 0; k < w; ++k)
        if (st[k] != '2') std::swap(perm[std::abs(b.letters[k]) - 1], perm[std::abs(b.letters[k])]);
      std::vector<char> seen(n, 0);
      int c = 0;
      for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++c;
        for (int j = i; !seen[j]; j = perm[j]) seen[j] = 1;
      }
      result = unlink(c);
    } else {
      std::string sw = st, sm = st;
      sw[bad] = st[bad] == '1' ? '0' : '1';
      sm[bad] = '2';
      LaurentAQ Psw = eval(sw), Psm = eval(sm);
      if (bad_positive)
        result = LaurentAQ::mono(2, 0, 1) * Psw - LaurentAQ::mono(1, 1, 1) * Psm;
      else
        result = LaurentAQ::mono(-2, 0, 1) * Psw + LaurentAQ::mono(-1, 1, 1) * Psm;
    }
    memo[st] = result;
    return result;
  }
};

void expand_d_power(std::map<int, BigInt>& snum, int e, int shift, const BigInt& c) {
  // add c * (s - s^{-1})^e * s^{shift} to the s-Laurent accumulator
  BigInt binom(1);
  for (int j = 0; j <= e; ++j) {
    BigInt term = binom * c;
    if (j % 2) term = -term;
    snum[e - 2 * j + shift] += term;
    binom = binom * BigInt(e - j) / BigInt(j + 1);
  }
}

QRat d_poly_to_qrat(const std::map<int, BigInt>& f, int w, int n) {
  int M = 0;
  for (auto& [dd, c] : f) M = std::max(M, -dd);
  std::map<int, BigInt> snum;
  for (auto& [dd, c] : f) expand_d_power(snum, dd + M, M + (w - n), c);
  QRat r;
  r.denpow = M;
  for (auto& [se, c] : snum) {
    if (c.is_zero()) continue;
    if (se % 2 != 0) throw std::domain_error("half-integer q powers did not clear");
    r.num[se / 2] += c;
  }
  r.normalize();
  return r;
}

}  // namespace

LaurentAQ homfly_skein(const BraidWord& b) {
  SkeinDiagram sd(b);
  return sd.eval(std::string(b.letters.size(), '0'));
}

QRat lowest_a_coefficient(const LaurentAQ& P, int n, int w, SignConvention conv) {
  std::map<int, BigInt> f;
  int lowest = 1 << 30;
  for (auto& [k, c] : P.terms) lowest = std::min(lowest, k.first);
  for (auto& [k, c] : P.terms)
    if (k.first == w - n) f[k.second] = c;
  if (f.empty() || lowest < w - n)
    throw std::domain_error("no clean a^{w-n} lowest term; input not a positive braid closure?");
  QRat r = d_poly_to_qrat(f, w, n);
  if (conv == SignConvention::Intro && (n - w) % 2 != 0)
    for (auto& [e, c] : r.num) c = -c;
  return r;
}

QRat rutherford_sum(const std::vector<Ruling>& rulings, int w, int n) {
  std::map<int, BigInt> f;
  for (const auto& r : rulings) {
    auto& v = f[r.switch_count() - n];
    v += BigInt(1);
  }
  return d_poly_to_qrat(f, w, n);
}

}  // namespace lk
