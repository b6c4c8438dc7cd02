#include "lk/moduli.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

namespace lk {

namespace {

GFMat col_rref(const FqField& F, const GFMat& m) {
  GFMat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  gf_rref(F, t);
  GFMat r(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r.at(i, j) = t.at(j, i);
  return r;
}

GFMat row_rref(const FqField& F, const GFMat& m) {
  GFMat t = m;
  gf_rref(F, t);
  return t;
}

// solve X u = C for full-column-rank X; throws if inconsistent
GFMat solve_full_col(const FqField& F, const GFMat& X, const GFMat& C) {
  GFMat w(X.rows, X.cols + C.cols);
  for (int i = 0; i < X.rows; ++i) {
    for (int j = 0; j < X.cols; ++j) w.at(i, j) = X.at(i, j);
    for (int j = 0; j < C.cols; ++j) w.at(i, X.cols + j) = C.at(i, j);
  }
  auto piv = gf_rref(F, w);
  if ((int)piv.size() < X.cols || (X.cols && piv[X.cols - 1] != X.cols - 1))
    throw std::logic_error("solve_full_col: matrix lost column rank");
  GFMat u(X.cols, C.cols);
  for (int i = 0; i < X.cols; ++i)
    for (int j = 0; j < C.cols; ++j) u.at(i, j) = w.at(i, X.cols + j);
  for (int i = X.cols; i < X.rows; ++i)
    for (int j = 0; j < C.cols; ++j)
      if (w.at(i, X.cols + j)) throw std::logic_error("solve_full_col: inconsistent system");
  return u;
}

GFMat stack_rows(const GFMat& a, const GFMat& b) {
  GFMat r(a.rows + b.rows, a.cols ? a.cols : b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < b.cols; ++j) r.at(a.rows + i, j) = b.at(i, j);
  return r;
}

std::string key_of(const std::vector<GFMat>& ms) {
  std::string s;
  for (const auto& m : ms) s += gf_key(m);
  return s;
}

}  // namespace

QuiverModel build_quiver_model(const FrontDiagram& d, const MaslovPotential& mu, int rank,
                               bool allow_mod2) {
  if (mu.values.empty() || (int)mu.values.size() != d.n_strands)
    throw ParseError("quiver model needs a potential on the strands");
  bool binary_z = mu.modulus == 0 && mu.binary;
  bool mod2 = mu.modulus == 2;
  if (!binary_z && !(allow_mod2 && mod2))
    throw ParseError(
        "front carries no binary Maslov potential; only the degree-zero binary case is modeled "
        "(general potentials need bounded complexes, out of scope)");

  QuiverModel m;
  m.d = d;
  m.rank = rank;
  m.arc_mu.assign(d.arcs.size(), 0);
  for (int a = 0; a < (int)d.arcs.size(); ++a)
    m.arc_mu[a] = ((mu.values[d.arcs[a].strand] % 2) + 2) % 2;

  // forced dimensions: r times the weighted strand count below, checked for
  // consistency across every gap occurrence of each region
  m.region_dim.assign(d.n_regions, -1);
  bool consistent = true;
  for (size_t col = 0; col < d.gap_regions.size(); ++col) {
    const auto& gaps = d.gap_regions[col];
    const auto& slots = d.slot_arcs[col];
    std::vector<int> below(gaps.size(), 0);
    for (int g = (int)gaps.size() - 2; g >= 0; --g)
      below[g] = below[g + 1] + (m.arc_mu[slots[g]] == 0 ? rank : -rank);
    for (size_t g = 0; g < gaps.size(); ++g) {
      int want = below[g] - (d.word.cylinder ? below[gaps.size() - 1] : 0);
      int& cur = m.region_dim[gaps[g]];
      if (cur == -1) cur = want;
      else if (cur != want) consistent = false;
    }
  }
  if (!consistent) throw std::logic_error("inconsistent forced dimensions; bad potential?");
  for (int u : d.unbounded)
    if (m.region_dim[u] != 0) m.feasible = false;
  for (int r2 : m.region_dim)
    if (r2 < 0) m.feasible = false;

  if (m.feasible) {
    for (int a = 0; a < (int)d.arcs.size(); ++a)
      if (m.dim_above(a) > 0 && m.dim_below(a) > 0) m.var_arcs.push_back(a);
    std::sort(m.var_arcs.begin(), m.var_arcs.end(), [&](int x, int y) {
      if (d.arcs[x].birth_event != d.arcs[y].birth_event)
        return d.arcs[x].birth_event < d.arcs[y].birth_event;
      return d.arcs[x].birth_slot < d.arcs[y].birth_slot;
    });
  }
  return m;
}

namespace {

struct Forest {
  enum EdgeKind { Complete, Parabolic, CuspPair, CuspPairSecondary };
  struct Edge {
    int child_region, parent_region, arc;
    bool child_is_below;  // child is the source of the arc's map
    EdgeKind kind;
    int arc2 = -1;  // matching upper arc for cusp-pair edges
  };
  std::vector<Edge> edges;  // in attach order
  std::vector<int> roots;
  std::vector<int> tree_arc_of;  // arc -> edge index or -1
};

// Gauge fixing along a spanning forest. A smaller child attached through a
// full-rank arc is fixed completely. A cusp inside region is fixed jointly
// through both cusp arcs (the round trip is a splitting), leaving only a
// GL_r block. A larger child attached through a single echelon arc keeps a
// parabolic stabilizer. Leftover components get GL roots. All stabilizer
// generators join the residual group for the orbit stage.
Forest build_forest(const QuiverModel& m) {
  const auto& d = m.d;
  Forest f;
  f.tree_arc_of.assign(d.arcs.size(), -1);
  std::vector<char> in(d.n_regions, 0);
  std::vector<int> order(d.n_regions);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return m.region_dim[x] > m.region_dim[y]; });
  int remaining = 0;
  for (int r = 0; r < d.n_regions; ++r)
    if (m.region_dim[r] > 0) ++remaining;
  std::vector<char> arc_is_var(d.arcs.size(), 0);
  for (int a : m.var_arcs) arc_is_var[a] = 1;
  while (remaining > 0) {
    int root = -1;
    for (int r : order)
      if (!in[r] && m.region_dim[r] > 0) { root = r; break; }
    f.roots.push_back(root);
    in[root] = 1;
    --remaining;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int pass = 0; pass < 3 && !grew; ++pass) {
        if (pass == 1) {
          for (const auto& c : d.cusps) {
            if (m.region_dim[c.outside] == 0) continue;
            if (!in[c.outside] || in[c.inside]) continue;
            if (!arc_is_var[c.lower] || !arc_is_var[c.upper]) continue;
            if (f.tree_arc_of[c.lower] >= 0 || f.tree_arc_of[c.upper] >= 0) continue;
            f.edges.push_back(
                {c.inside, c.outside, c.lower, false, Forest::CuspPair, c.upper});
            f.tree_arc_of[c.lower] = (int)f.edges.size() - 1;
            f.edges.push_back(
                {c.inside, c.outside, c.upper, true, Forest::CuspPairSecondary, c.lower});
            f.tree_arc_of[c.upper] = (int)f.edges.size() - 1;
            in[c.inside] = 1;
            --remaining;
            grew = true;
            break;
          }
          continue;
        }
        for (int a : m.var_arcs) {
          if (f.tree_arc_of[a] >= 0) continue;
          int B = d.arcs[a].below_region, A = d.arcs[a].above_region;
          int big = m.dim_above(a) > m.dim_below(a) ? A : B;
          int small = big == A ? B : A;
          int child = -1, parent = -1;
          if (pass == 0 && in[big] && !in[small]) { child = small; parent = big; }
          if (pass == 2 && in[small] && !in[big]) { child = big; parent = small; }
          if (child < 0) continue;
          f.edges.push_back({child, parent, a, child == B,
                             pass == 0 ? Forest::Complete : Forest::Parabolic, -1});
          f.tree_arc_of[a] = (int)f.edges.size() - 1;
          in[child] = 1;
          --remaining;
          grew = true;
          break;
        }
      }
    }
  }
  return f;
}

// row reduce with the invertible transform: returns v with v m = rref(m)
std::pair<GFMat, GFMat> row_reduce_transform(const FqField& F, const GFMat& m) {
  GFMat w(m.rows, m.cols + m.rows);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) w.at(i, j) = m.at(i, j);
    w.at(i, m.cols + i) = 1;
  }
  // eliminate on the left block only
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (w.at(i, c)) { piv = i; break; }
    if (piv < 0) continue;
    for (int j = 0; j < w.cols; ++j) std::swap(w.a[(size_t)piv * w.cols + j], w.a[(size_t)r * w.cols + j]);
    uint8_t iv = F.inv(w.at(r, c));
    for (int j = 0; j < w.cols; ++j) w.at(r, j) = F.mul(w.at(r, j), iv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || !w.at(i, c)) continue;
      uint8_t fct = w.at(i, c);
      for (int j = 0; j < w.cols; ++j) w.at(i, j) = F.sub(w.at(i, j), F.mul(fct, w.at(r, j)));
    }
    ++r;
  }
  GFMat rr(m.rows, m.cols), v(m.rows, m.rows);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) rr.at(i, j) = w.at(i, j);
    for (int j = 0; j < m.rows; ++j) v.at(i, j) = w.at(i, m.cols + j);
  }
  return {rr, v};
}

// column version: returns u with m u = colrref(m)
std::pair<GFMat, GFMat> col_reduce_transform(const FqField& F, const GFMat& m) {
  GFMat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  auto [rr, v] = row_reduce_transform(F, t);
  GFMat c(m.rows, m.cols), u(m.cols, m.cols);
  for (int i = 0; i < rr.rows; ++i)
    for (int j = 0; j < rr.cols; ++j) c.at(j, i) = rr.at(i, j);
  for (int i = 0; i < v.rows; ++i)
    for (int j = 0; j < v.cols; ++j) u.at(j, i) = v.at(i, j);
  return {c, u};
}

struct CandidateCache {
  const FqField& F;
  std::map<std::tuple<int, int, int>, std::vector<GFMat>> cache;

  // mode 0: all full-rank; 1: column echelon canonical; 2: row echelon
  const std::vector<GFMat>& get(int rows, int cols, int mode) {
    auto k = std::make_tuple(rows, cols, mode);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    std::vector<GFMat> out;
    int want = std::min(rows, cols);
    gf_enumerate(F, rows, cols, [&](const GFMat& m) {
      if (gf_rank(F, m) != want) return;
      if (mode == 1 && !(col_rref(F, m) == m)) return;
      if (mode == 2 && !(row_rref(F, m) == m)) return;
      out.push_back(m);
    });
    return cache.emplace(k, std::move(out)).first->second;
  }
};

struct Check {
  enum Kind { CuspRT, CrossCommute, CrossInj, CrossSurj } kind;
  int id;
};

// Enumerate solutions X of L X = R (left form) or X K = R (right form),
// where X has the given shape. Affine space: particular solution plus the
// kernel of the known side. Returns false when the space is too large to
// enumerate profitably.
bool solve_affine(const FqField& F, bool left, const GFMat& known, const GFMat& R, int rows,
                  int cols, std::vector<GFMat>& out) {
  // reduce the right form to the left form by transposing
  GFMat L = known, Rh = R;
  int xr = rows, xc = cols;
  if (!left) {
    GFMat kt(known.cols, known.rows), rt(R.cols, R.rows);
    for (int i = 0; i < known.rows; ++i)
      for (int j = 0; j < known.cols; ++j) kt.at(j, i) = known.at(i, j);
    for (int i = 0; i < R.rows; ++i)
      for (int j = 0; j < R.cols; ++j) rt.at(j, i) = R.at(i, j);
    L = kt;
    Rh = rt;
    xr = cols;
    xc = rows;
  }
  // solve L X' = Rh for X' (xr x xc)
  GFMat w(L.rows, L.cols + Rh.cols);
  for (int i = 0; i < L.rows; ++i) {
    for (int j = 0; j < L.cols; ++j) w.at(i, j) = L.at(i, j);
    for (int j = 0; j < Rh.cols; ++j) w.at(i, L.cols + j) = Rh.at(i, j);
  }
  auto piv = gf_rref(F, w);
  std::vector<int> pivots;
  for (int c : piv) {
    if (c >= L.cols) return true;  // inconsistent: no solutions
    pivots.push_back(c);
  }
  GFMat ker = gf_kernel(F, L);  // xr x k
  int k = ker.cols;
  if (k * xc > 16) return false;  // not worth enumerating here
  GFMat part(xr, xc);
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < xc; ++j) part.at(pivots[r], j) = w.at((int)r, L.cols + j);
  GFMat C(k, xc);
  size_t total = 1;
  for (int i = 0; i < k * xc; ++i) total *= F.p();
  for (size_t t = 0; t < total; ++t) {
    size_t v = t;
    for (auto& e : C.a) {
      e = (uint8_t)(v % F.p());
      v /= F.p();
    }
    GFMat Xp = k ? gf_add(F, part, gf_mul(F, ker, C)) : part;
    if (left) {
      out.push_back(Xp);
    } else {
      GFMat X(rows, cols);
      for (int i = 0; i < Xp.rows; ++i)
        for (int j = 0; j < Xp.cols; ++j) X.at(j, i) = Xp.at(i, j);
      out.push_back(X);
    }
  }
  return true;
}

struct GenRule {
  int kind = 0;  // 1: X k1 = I, 2: k1 X = I, 3: X k1 = k2 k3, 4: k1 X = k2 k3
  int k1 = -1, k2 = -1, k3 = -1;
  int iddim = 0;
};

struct Searcher {
  const QuiverModel& m;
  const FqField& F;
  const Forest& forest;
  CandidateCache& cands;
  long long cap;

  std::vector<int> arc_pos;
  std::vector<std::vector<Check>> due;  // checks complete once var idx assigned
  std::vector<GenRule> rules;           // per var index
  std::vector<GFMat> cur;
  std::vector<std::string> solutions;
  long long visited = 0;

  std::vector<int> order;  // var arcs in assignment order

  // Greedy assignment order: close cusp and crossing systems as soon as
  // possible, otherwise prefer echelon tree arcs and small shapes.
  void plan_order() {
    size_t nv = m.var_arcs.size();
    std::vector<char> placed_arc(m.d.arcs.size(), 1);
    for (int a : m.var_arcs) placed_arc[a] = 0;
    std::vector<char> used(nv, 0);
    order.clear();
    auto placed = [&](int arc) { return placed_arc[arc] != 0; };
    while (order.size() < nv) {
      int best = -1;
      long long best_score = -1;
      for (size_t i = 0; i < nv; ++i) {
        if (used[i]) continue;
        int a = m.var_arcs[i];
        long long score = 1000 + (long long)m.dim_above(a) * m.dim_below(a);
        if (forest.tree_arc_of[a] >= 0) score = 100 + m.dim_above(a) * m.dim_below(a);
        for (const auto& c : m.d.cusps)
          if (m.region_dim[c.outside] > 0 &&
              ((c.upper == a && placed(c.lower)) || (c.lower == a && placed(c.upper))))
            score = std::min(score, 0LL);
        for (const auto& c : m.d.crossings) {
          int others = 0, mine = 0;
          for (int x : {c.se, c.sw, c.ne, c.nw}) {
            if (x == a) mine = 1;
            else if (placed(x)) ++others;
          }
          if (mine && others == 3) score = std::min(score, 1LL);
          if (mine && others == 2) score = std::min(score, 60LL);
        }
        if (best < 0 || score < best_score) {
          best = (int)i;
          best_score = score;
        }
      }
      used[best] = 1;
      placed_arc[m.var_arcs[best]] = 1;
      order.push_back(m.var_arcs[best]);
    }
  }

  Searcher(const QuiverModel& mm, const FqField& Ff, const Forest& fo, CandidateCache& cc,
           long long cap_)
      : m(mm), F(Ff), forest(fo), cands(cc), cap(cap_) {
    plan_order();
    arc_pos.assign(m.d.arcs.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) arc_pos[order[i]] = (int)i;
    due.assign(order.size() + 1, {});
    rules.assign(order.size(), {});
    auto ready_at = [&](std::initializer_list<int> arcs) {
      int last = -1;
      for (int a : arcs) last = std::max(last, arc_pos[a]);
      return last + 1;
    };
    for (int ci = 0; ci < (int)m.d.cusps.size(); ++ci) {
      const auto& c = m.d.cusps[ci];
      if (m.region_dim[c.outside] == 0) continue;
      due[ready_at({c.upper, c.lower})].push_back({Check::CuspRT, ci});
      int pu = arc_pos[c.upper], pl = arc_pos[c.lower];
      if (pu >= 0 && pl >= 0) {
        // generate the later arc of the pair from the round-trip identity
        if (pu > pl) rules[pu] = {1, c.lower, -1, -1, m.region_dim[c.outside]};
        else rules[pl] = {2, c.upper, -1, -1, m.region_dim[c.outside]};
      }
    }
    for (int xi = 0; xi < (int)m.d.crossings.size(); ++xi) {
      const auto& c = m.d.crossings[xi];
      if (m.region_dim[c.rS] > 0) due[ready_at({c.se, c.sw})].push_back({Check::CrossInj, xi});
      if (m.region_dim[c.rN] > 0) due[ready_at({c.ne, c.nw})].push_back({Check::CrossSurj, xi});
      due[ready_at({c.se, c.sw, c.ne, c.nw})].push_back({Check::CrossCommute, xi});
      int last = -1, last_arc = -1;
      for (int a : {c.se, c.sw, c.ne, c.nw})
        if (arc_pos[a] > last) {
          last = arc_pos[a];
          last_arc = a;
        }
      if (last < 0 || rules[last].kind != 0) continue;
      if (last_arc == c.ne) rules[last] = {3, c.se, c.nw, c.sw, 0};
      else if (last_arc == c.se) rules[last] = {4, c.ne, c.nw, c.sw, 0};
      else if (last_arc == c.nw) rules[last] = {3, c.sw, c.ne, c.se, 0};
      else if (last_arc == c.sw) rules[last] = {4, c.nw, c.ne, c.se, 0};
    }
    // tree arcs keep their echelon candidate lists
    for (size_t i = 0; i < order.size(); ++i)
      if (forest.tree_arc_of[order[i]] >= 0) rules[i] = {};
  }

  GFMat mat_of(int arc) const {
    int pos = arc_pos[arc];
    if (pos >= 0 && pos < (int)cur.size()) return cur[pos];
    return GFMat(m.dim_above(arc), m.dim_below(arc));
  }

  bool run_check(const Check& ck) const {
    if (ck.kind == Check::CuspRT) {
      const auto& c = m.d.cusps[ck.id];
      return gf_mul(F, mat_of(c.upper), mat_of(c.lower)) ==
             GFMat::identity(m.region_dim[c.outside]);
    }
    const auto& c = m.d.crossings[ck.id];
    if (ck.kind == Check::CrossInj) {
      GFMat st = stack_rows(mat_of(c.se), mat_of(c.sw));
      return gf_rank(F, st) == m.region_dim[c.rS];
    }
    if (ck.kind == Check::CrossSurj) {
      GFMat ne = mat_of(c.ne), nw = mat_of(c.nw);
      GFMat wide(m.region_dim[c.rN], ne.cols + nw.cols);
      for (int i = 0; i < wide.rows; ++i) {
        for (int j = 0; j < ne.cols; ++j) wide.at(i, j) = ne.at(i, j);
        for (int j = 0; j < nw.cols; ++j) wide.at(i, ne.cols + j) = F.neg(nw.at(i, j));
      }
      return gf_rank(F, wide) == m.region_dim[c.rN];
    }
    return gf_mul(F, mat_of(c.ne), mat_of(c.se)) == gf_mul(F, mat_of(c.nw), mat_of(c.sw));
  }

  // checks with no variable arcs are constant; a failing one empties the moduli
  bool constant_checks_pass() const {
    for (const auto& ck : due[0])
      if (!run_check(ck)) return false;
    return true;
  }

  void dfs(size_t idx) {
    if (++visited > cap) throw std::runtime_error("enumeration resource cap exceeded");
    if (idx == order.size()) {
      // serialize in the canonical var-arc order
      std::vector<GFMat> canon;
      canon.reserve(m.var_arcs.size());
      for (int a : m.var_arcs) canon.push_back(cur[arc_pos[a]]);
      solutions.push_back(key_of(canon));
      return;
    }
    int arc = order[idx];
    int rows = m.dim_above(arc), cols = m.dim_below(arc);
    int tree = forest.tree_arc_of[arc];
    int mode = tree >= 0 ? (forest.edges[tree].child_is_below ? 1 : 2) : 0;

    std::vector<GFMat> generated;
    bool use_generated = false;
    const GenRule& rule = rules[idx];
    if (rule.kind != 0) {
      GFMat known, R;
      bool left = rule.kind == 2 || rule.kind == 4;
      known = mat_of(rule.k1);
      if (rule.kind <= 2) R = GFMat::identity(rule.iddim);
      else R = gf_mul(F, mat_of(rule.k2), mat_of(rule.k3));
      use_generated = solve_affine(F, left, known, R, rows, cols, generated);
    }
    int want_rank = std::min(rows, cols);
    const std::vector<GFMat>& list =
        use_generated ? generated : cands.get(rows, cols, mode);
    for (const auto& cand : list) {
      if (use_generated && gf_rank(F, cand) != want_rank) continue;
      cur.push_back(cand);
      bool ok = true;
      for (const auto& ck : due[idx + 1])
        if (!run_check(ck)) {
          ok = false;
          break;
        }
      if (ok) dfs(idx + 1);
      cur.pop_back();
    }
  }
};

std::vector<GFMat> gl_generators(const FqField& F, int d) {
  std::vector<GFMat> gens;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      for (int l = 1; l < F.p(); ++l) {
        GFMat g = GFMat::identity(d);
        g.at(i, j) = (uint8_t)l;
        gens.push_back(g);
      }
    }
  for (int u = 2; u < F.p(); ++u) {
    GFMat g = GFMat::identity(d);
    g.at(0, 0) = (uint8_t)u;
    gens.push_back(g);
  }
  if (gens.empty()) gens.push_back(GFMat::identity(d));
  return gens;
}

struct OrbitEngine {
  const QuiverModel& m;
  const FqField& F;
  const Forest& forest;
  std::vector<int> pos_of_arc;

  OrbitEngine(const QuiverModel& mm, const FqField& Ff, const Forest& fo)
      : m(mm), F(Ff), forest(fo) {
    pos_of_arc.assign(m.d.arcs.size(), -1);
    for (size_t i = 0; i < m.var_arcs.size(); ++i) pos_of_arc[m.var_arcs[i]] = (int)i;
  }

  std::vector<GFMat> unpack(const std::string& key) const {
    std::vector<GFMat> ms;
    size_t off = 0;
    for (int a : m.var_arcs) {
      GFMat mm(m.dim_above(a), m.dim_below(a));
      off += 2;
      for (auto& v : mm.a) v = (uint8_t)key[off++];
      ms.push_back(std::move(mm));
    }
    return ms;
  }

  // gauge by g at one region (a root or a parabolic child), transported
  // down the forest with tree arcs recanonicalized
  std::vector<GFMat> transform(const std::vector<GFMat>& sol, int r0, const GFMat& g) const {
    std::vector<GFMat> h(m.d.n_regions), hinv(m.d.n_regions);
    for (int r : forest.roots) {
      int dr = m.region_dim[r];
      h[r] = r == r0 ? g : GFMat::identity(dr);
      hinv[r] = gf_inverse(F, h[r]);
    }
    std::vector<GFMat> out = sol;
    for (const auto& e : forest.edges) {
      if (e.kind == Forest::CuspPairSecondary) continue;
      const GFMat& M = sol[pos_of_arc[e.arc]];
      GFMat nh, nm;
      if (e.kind == Forest::CuspPair) {
        // lower arc X: O -> I, upper arc Y: I -> O with Y X = id; fix the
        // split to ([I;0], [I|0]) via h_I = [Y; left-null(X)]
        GFMat X = gf_mul(F, M, hinv[e.parent_region]);
        GFMat Y = gf_mul(F, h[e.parent_region], sol[pos_of_arc[e.arc2]]);
        GFMat Xt(X.cols, X.rows);
        for (int i = 0; i < X.rows; ++i)
          for (int j = 0; j < X.cols; ++j) Xt.at(j, i) = X.at(i, j);
        GFMat K = gf_kernel(F, Xt);  // columns: left null vectors of X
        GFMat hI(X.rows, X.rows);
        for (int i = 0; i < Y.rows; ++i)
          for (int j = 0; j < X.rows; ++j) hI.at(i, j) = Y.at(i, j);
        for (int i = 0; i < K.cols; ++i)
          for (int j = 0; j < X.rows; ++j) hI.at(Y.rows + i, j) = K.at(j, i);
        if (e.child_region == r0) hI = gf_mul(F, g, hI);
        h[e.child_region] = hI;
        hinv[e.child_region] = gf_inverse(F, hI);
        out[pos_of_arc[e.arc]] = gf_mul(F, hI, X);
        out[pos_of_arc[e.arc2]] = gf_mul(F, Y, hinv[e.child_region]);
        continue;
      }
      if (e.child_is_below) {
        // M: child -> parent; M' = h_P M h_C^{-1}, canonicalized over h_C
        GFMat X = gf_mul(F, h[e.parent_region], M);
        auto [C, u] = col_reduce_transform(F, X);  // X u = C
        nh = gf_inverse(F, u);
        nm = C;
        if (e.child_region == r0) {
          nh = gf_mul(F, g, nh);
          nm = gf_mul(F, C, gf_inverse(F, g));
        }
      } else {
        // M: parent -> child; M' = h_C M h_P^{-1}, canonicalized over h_C
        GFMat X = gf_mul(F, M, hinv[e.parent_region]);
        auto [R, v] = row_reduce_transform(F, X);  // v X = R
        nh = v;
        nm = R;
        if (e.child_region == r0) {
          nh = gf_mul(F, g, nh);
          nm = gf_mul(F, g, R);
        }
      }
      h[e.child_region] = nh;
      hinv[e.child_region] = gf_inverse(F, nh);
      out[pos_of_arc[e.arc]] = nm;
    }
    for (size_t i = 0; i < m.var_arcs.size(); ++i) {
      int a = m.var_arcs[i];
      if (forest.tree_arc_of[a] >= 0) continue;
      out[i] = gf_mul(F, gf_mul(F, h[m.d.arcs[a].above_region], sol[i]),
                      hinv[m.d.arcs[a].below_region]);
    }
    return out;
  }
};

// residual generators: GL at the roots, edge stabilizers at partially fixed
// children
std::vector<std::pair<int, GFMat>> residual_generators(const QuiverModel& m, const FqField& F,
                                                       const Forest& forest) {
  std::vector<std::pair<int, GFMat>> gens;
  auto keep = [&](int region, const GFMat& g) {
    if (g == GFMat::identity(g.rows)) return;
    gens.push_back({region, g});
  };
  for (int r : forest.roots)
    for (auto& g : gl_generators(F, m.region_dim[r])) keep(r, g);
  for (const auto& e : forest.edges) {
    if (e.kind == Forest::Complete || e.kind == Forest::CuspPairSecondary) continue;
    int dp = m.region_dim[e.parent_region];
    int dc = m.region_dim[e.child_region];
    int r = dc - dp;
    if (e.kind == Forest::Parabolic) {
      // child above: stab of [I;0] under left mult is [[I,X],[0,Y]];
      // child below: stab of [I|0] under right mult is [[I,0],[Z,W]]
      for (int i = 0; i < dp; ++i)
        for (int j = 0; j < r; ++j)
          for (int l = 1; l < F.p(); ++l) {
            GFMat g = GFMat::identity(dc);
            if (!e.child_is_below) g.at(i, dp + j) = (uint8_t)l;
            else g.at(dp + j, i) = (uint8_t)l;
            keep(e.child_region, g);
          }
    }
    for (auto& y : gl_generators(F, r)) {
      GFMat g = GFMat::identity(dc);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) g.at(dp + i, dp + j) = y.at(i, j);
      keep(e.child_region, g);
    }
  }
  return gens;
}

BigInt residual_order(const QuiverModel& m, const FqField& F, const Forest& forest) {
  BigInt res(1);
  for (int r : forest.roots) res = res * F.gl_order(m.region_dim[r]);
  for (const auto& e : forest.edges) {
    if (e.kind == Forest::Complete || e.kind == Forest::CuspPairSecondary) continue;
    int dp = m.region_dim[e.parent_region];
    int r = m.region_dim[e.child_region] - dp;
    res = res * F.gl_order(r);
    if (e.kind == Forest::Parabolic)
      for (int i = 0; i < dp * r; ++i) res = res * BigInt(F.p());
  }
  return res;
}

}  // namespace

ModuliResult enumerate_objects(const QuiverModel& m, const FqField& F,
                               const EnumerateOptions& opt) {
  ModuliResult res;
  res.summary.orbifold_count = Rational(0);
  if (!m.feasible) return res;

  Forest forest = build_forest(m);
  CandidateCache cc{F};
  Searcher s(m, F, forest, cc, opt.solution_cap);
  if (!s.constant_checks_pass()) return res;
  s.dfs(0);
  std::sort(s.solutions.begin(), s.solutions.end());

  BigInt res_order = residual_order(m, F, forest);

  OrbitEngine oe(m, F, forest);
  std::unordered_map<std::string, int> index;
  index.reserve(s.solutions.size() * 2);
  for (size_t i = 0; i < s.solutions.size(); ++i) index[s.solutions[i]] = (int)i;
  std::vector<char> seen(s.solutions.size(), 0);
  std::vector<std::pair<int, GFMat>> gens = residual_generators(m, F, forest);

  for (size_t i = 0; i < s.solutions.size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> orbit = {(int)i};
    seen[i] = 1;
    std::string best = s.solutions[i];
    for (size_t qh = 0; qh < orbit.size(); ++qh) {
      auto sol = oe.unpack(s.solutions[orbit[qh]]);
      for (auto& [root, g] : gens) {
        auto ns = oe.transform(sol, root, g);
        std::string k = key_of(ns);
        auto it = index.find(k);
        if (it == index.end()) throw std::logic_error("gauge image left the solution set");
        if (!seen[it->second]) {
          seen[it->second] = 1;
          orbit.push_back(it->second);
        }
        if (k < best) best = k;
      }
    }
    SheafObject obj;
    obj.p = F.p();
    obj.rank = m.rank;
    obj.region_dim = m.region_dim;
    auto ms = oe.unpack(best);
    for (size_t k = 0; k < m.var_arcs.size(); ++k) obj.arc_maps[m.var_arcs[k]] = ms[k];
    obj.aut_order = res_order / BigInt((long long)orbit.size());
    if (!(obj.aut_order * BigInt((long long)orbit.size()) == res_order))
      throw std::logic_error("orbit size does not divide the residual group order");
    res.classes.push_back(std::move(obj));
  }
  std::sort(res.classes.begin(), res.classes.end(),
            [&](const SheafObject& x, const SheafObject& y) {
              std::string kx, ky;
              for (auto& [a, mm] : x.arc_maps) kx += gf_key(mm);
              for (auto& [a, mm] : y.arc_maps) ky += gf_key(mm);
              return kx < ky;
            });

  res.summary.class_count = (long long)res.classes.size();
  Rational total(0);
  for (auto& o : res.classes) {
    total += Rational(BigInt(1), o.aut_order);
    res.summary.aut_histogram[o.aut_order.to_string()]++;
  }
  res.summary.orbifold_count = total;
  Rational direct(BigInt((long long)s.solutions.size()), res_order);
  if (!(direct == total)) throw std::logic_error("orbifold count mismatch");
  return res;
}

std::vector<int> microlocal_rank(const QuiverModel& m, const FqField& F, const SheafObject& o) {
  std::vector<int> rk(m.d.arcs.size(), 0);
  for (int a = 0; a < (int)m.d.arcs.size(); ++a) {
    int r = 0;
    auto it = o.arc_maps.find(a);
    if (it != o.arc_maps.end()) r = gf_rank(F, it->second);
    rk[a] = m.arc_mu[a] == 0 ? m.dim_above(a) - r : m.dim_below(a) - r;
  }
  return rk;
}

namespace {

// dim(U ∩ W) = dim U + dim W - dim(U + W)
int intersect_dim(const FqField& F, const GFMat& emb, const GFMat& Tbasis) {
  int du = emb.cols;
  int dw = Tbasis.rows;
  int n = emb.rows;
  GFMat joint(n, du + dw);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < du; ++j) joint.at(i, j) = emb.at(i, j);
    for (int j = 0; j < dw; ++j) joint.at(i, du + j) = Tbasis.at(j, i);
  }
  return du + dw - gf_rank(F, joint);
}

}  // namespace

std::vector<int> normal_ruling_switches(const QuiverModel& m, const FqField& F,
                                        const SheafObject& o, const BraidWord& b) {
  if (m.rank != 1) throw ParseError("normal ruling filtrations are implemented for rank 1");
  const auto& d = m.d;
  int n = b.strands;
  int w = (int)b.letters.size();
  if ((int)d.word.events.size() != 2 * n + w)
    throw ParseError("normal ruling extraction expects a rainbow closure word");

  auto arc_mat = [&](int a) {
    auto it = o.arc_maps.find(a);
    if (it != o.arc_maps.end()) return it->second;
    return GFMat(m.dim_above(a), m.dim_below(a));
  };

  // top flag T_i = ker(central -> i steps up) through the closure arcs
  const auto& closure_slots = d.slot_arcs[n];
  std::vector<GFMat> T(n + 1);
  T[0] = GFMat(0, n);
  GFMat up = GFMat::identity(n);
  for (int i = 1; i <= n; ++i) {
    up = gf_mul(F, arc_mat(closure_slots[n - i]), up);
    GFMat k = gf_kernel(F, up);
    GFMat basis(k.cols, n);
    for (int r = 0; r < k.cols; ++r)
      for (int c2 = 0; c2 < n; ++c2) basis.at(r, c2) = k.at(c2, r);
    gf_rref(F, basis);
    T[i] = basis;
  }

  // braid-strip embeddings are taken per column: the stalk below the g-th
  // braid strand embeds into the central stalk along that column only
  auto column_embs = [&](int col) {
    const auto& slots = d.slot_arcs[col];
    std::vector<GFMat> emb(n + 1);
    emb[0] = GFMat::identity(n);  // gap index n = central
    for (int g = 1; g <= n; ++g) emb[g] = gf_mul(F, emb[g - 1], arc_mat(slots[n + g - 1]));
    return emb;
  };
  auto eye_at = [&](const std::vector<GFMat>& emb, int braid_gap) {
    // graded index where the jump across the strand above this gap happens
    for (int i = 1; i <= n; ++i) {
      int ja = intersect_dim(F, emb[braid_gap - 1], T[i]) -
               intersect_dim(F, emb[braid_gap - 1], T[i - 1]);
      int jb = intersect_dim(F, emb[braid_gap], T[i]) - intersect_dim(F, emb[braid_gap], T[i - 1]);
      if (ja - jb == 1) return i;
    }
    throw std::logic_error("no graded jump across a braid arc");
  };

  std::vector<int> switches;
  for (int x = 0; x < (int)d.crossings.size(); ++x) {
    const auto& c = d.crossings[x];
    int col = c.event;           // column just before the crossing
    int p = d.word.events[c.event].level - 1;
    auto before = column_embs(col);
    auto after = column_embs(col + 1);
    int i_nw = eye_at(before, p - n + 1);
    int i_ne = eye_at(after, p - n + 1);
    if (i_nw == i_ne) switches.push_back(x);
  }
  std::sort(switches.begin(), switches.end());
  return switches;
}

std::vector<StratumCount> stratified_counts(const QuiverModel& m, const FqField& F,
                                            const ModuliResult& objs, const BraidWord& b,
                                            const std::vector<Ruling>& rulings) {
  std::vector<StratumCount> out(rulings.size());
  for (size_t i = 0; i < rulings.size(); ++i) {
    out[i].switches = rulings[i].switches;
    out[i].orbifold_count = Rational(0);
  }
  for (const auto& o : objs.classes) {
    auto sw = normal_ruling_switches(m, F, o, b);
    int found = -1;
    for (size_t i = 0; i < rulings.size(); ++i)
      if (rulings[i].switches == sw) {
        found = (int)i;
        break;
      }
    if (found < 0)
      throw std::logic_error("object's ruling is not among the graded normal rulings");
    out[found].class_count++;
    out[found].orbifold_count += Rational(BigInt(1), o.aut_order);
  }
  return out;
}

namespace {

struct FlagTable {
  const FqField& F;
  int n;
  std::vector<std::vector<GFMat>> flags;  // canonical bases per level 1..n-1
  std::map<std::string, int> index;

  FlagTable(const FqField& Ff, int nn) : F(Ff), n(nn) { build(); }

  std::string key(const std::vector<GFMat>& f) const {
    std::string s;
    for (auto& m : f) s += gf_key(m);
    return s;
  }

  void build() {
    std::vector<std::vector<GFMat>> cur = {{}};
    for (int lvl = 1; lvl < n; ++lvl) {
      std::vector<std::vector<GFMat>> nx;
      std::set<std::string> seen;
      for (auto& f : cur) {
        GFMat base = lvl == 1 ? GFMat(0, n) : f.back();
        gf_enumerate(F, 1, n, [&](const GFMat& vv) {
          GFMat st = stack_rows(base, vv);
          if (gf_rank(F, st) != lvl) return;
          GFMat canon = st;
          gf_rref(F, canon);
          auto nf = f;
          nf.push_back(canon);
          std::string k = key(nf);
          if (seen.insert(k).second) nx.push_back(std::move(nf));
        });
      }
      cur = std::move(nx);
    }
    for (auto& f : cur) {
      index[key(f)] = (int)flags.size();
      flags.push_back(f);
    }
  }

  int id_of(const std::vector<GFMat>& f) const {
    auto it = index.find(key(f));
    if (it == index.end()) throw std::logic_error("flag not in table");
    return it->second;
  }

  std::vector<int> bs_neighbors(int fid, int i) const {
    const auto& f = flags[fid];
    std::vector<int> out;
    GFMat below = i == 1 ? GFMat(0, n) : f[i - 2];
    GFMat above = i == n - 1 ? GFMat::identity(n) : f[i];
    std::set<std::string> seen;
    gf_enumerate(F, 1, above.rows, [&](const GFMat& coef) {
      GFMat vv = gf_mul(F, coef, above);
      GFMat st = stack_rows(below, vv);
      if (gf_rank(F, st) != i) return;
      GFMat canon = st;
      gf_rref(F, canon);
      if (canon == f[i - 1]) return;
      auto nf = f;
      nf[i - 1] = canon;
      std::string k = key(nf);
      if (!seen.insert(k).second) return;
      auto it = index.find(k);
      if (it == index.end()) throw std::logic_error("neighbor flag missing");
      out.push_back(it->second);
    });
    return out;
  }

  GFMat T_basis(int i) const {
    GFMat t(i, n);
    for (int r = 0; r < i; ++r) t.at(r, n - i + r) = 1;
    return t;
  }

  bool transverse_to_T(int fid) const {
    const auto& f = flags[fid];
    for (int i = 1; i < n; ++i) {
      GFMat st = stack_rows(f[i - 1], T_basis(n - i));
      if (gf_rank(F, st) != n) return false;
    }
    return true;
  }

  int act(int fid, const GFMat& g) const {
    GFMat gt(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gt.at(i, j) = g.at(j, i);
    auto f = flags[fid];
    for (auto& lvl : f) {
      lvl = gf_mul(F, lvl, gt);
      gf_rref(F, lvl);
    }
    return id_of(f);
  }
};

void flag_sequences(const FlagTable& ft, const BraidWord& b, bool need_transverse,
                    const std::function<void(const std::vector<int>&)>& fn) {
  int w = (int)b.letters.size();
  std::vector<int> seq(w + 1);
  std::function<void(int)> rec = [&](int j) {
    if (j == w) {
      if (!need_transverse || ft.transverse_to_T(seq[w])) fn(seq);
      return;
    }
    for (int nx : ft.bs_neighbors(seq[j], b.letters[j])) {
      seq[j + 1] = nx;
      rec(j + 1);
    }
  };
  for (int f0 = 0; f0 < (int)ft.flags.size(); ++f0) {
    if (need_transverse && !ft.transverse_to_T(f0)) continue;
    seq[0] = f0;
    rec(0);
  }
}

std::vector<GFMat> borel_elements(const FlagTable& ft) {
  std::vector<GFMat> borel;
  gf_enumerate(ft.F, ft.n, ft.n, [&](const GFMat& g) {
    if (!gf_invertible(ft.F, g)) return;
    GFMat gt(ft.n, ft.n);
    for (int r = 0; r < ft.n; ++r)
      for (int c = 0; c < ft.n; ++c) gt.at(r, c) = g.at(c, r);
    for (int i = 1; i < ft.n; ++i) {
      GFMat t = ft.T_basis(i);
      GFMat img = gf_mul(ft.F, t, gt);
      GFMat st = stack_rows(t, img);
      if (gf_rank(ft.F, st) != i) return;
    }
    borel.push_back(g);
  });
  return borel;
}

}  // namespace

ModuliResult enumerate_rainbow_flags(const BraidWord& b, const FqField& F) {
  if (!b.positive()) throw ParseError("flag enumeration needs a positive braid");
  int n = b.strands;
  FlagTable ft(F, n);

  std::vector<std::vector<int>> sols;
  flag_sequences(ft, b, true, [&](const std::vector<int>& s) { sols.push_back(s); });
  std::sort(sols.begin(), sols.end());

  std::vector<GFMat> borel = borel_elements(ft);
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < sols.size(); ++i) index[sols[i]] = (int)i;
  std::vector<char> seen(sols.size(), 0);

  ModuliResult res;
  res.summary.orbifold_count = Rational(0);
  BigInt bsize((long long)borel.size());
  for (size_t i = 0; i < sols.size(); ++i) {
    if (seen[i]) continue;
    long long orbit = 0;
    std::set<std::vector<int>> members = {sols[i]};
    std::deque<std::vector<int>> queue = {sols[i]};
    seen[i] = 1;
    while (!queue.empty()) {
      auto s = queue.front();
      queue.pop_front();
      ++orbit;
      auto it = index.find(s);
      if (it == index.end()) throw std::logic_error("borel image left the flag solutions");
      seen[it->second] = 1;
      for (auto& g : borel) {
        auto ns = s;
        for (auto& fid : ns) fid = ft.act(fid, g);
        if (members.insert(ns).second) queue.push_back(ns);
      }
    }
    SheafObject obj;
    obj.p = F.p();
    obj.rank = 1;
    obj.aut_order = bsize / BigInt(orbit);
    res.summary.aut_histogram[obj.aut_order.to_string()]++;
    res.classes.push_back(std::move(obj));
  }
  res.summary.class_count = (long long)res.classes.size();
  Rational total(0);
  for (auto& o : res.classes) total += Rational(BigInt(1), o.aut_order);
  res.summary.orbifold_count = total;
  Rational direct(BigInt((long long)sols.size()), bsize);
  if (!(direct == total)) throw std::logic_error("flag orbifold count mismatch");
  return res;
}

Rational open_bott_samelson_count(const BraidWord& b, const FqField& F) {
  if (!b.positive()) throw ParseError("flag enumeration needs a positive braid");
  FlagTable ft(F, b.strands);
  long long count = 0;
  flag_sequences(ft, b, false, [&](const std::vector<int>&) { ++count; });
  return Rational(BigInt(count), F.gl_order(b.strands));
}

CylindricalResult enumerate_cylindrical(const BraidWord& b, const FqField& F) {
  if (!b.positive()) throw ParseError("cylindrical enumeration needs a positive braid");
  int n = b.strands;
  if (n > 3 && !(n == 4 && F.p() == 2))
    throw std::runtime_error("cylindrical search bound exceeded");
  FlagTable ft(F, n);

  std::vector<GFMat> gl;
  gf_enumerate(F, n, n, [&](const GFMat& g) {
    if (gf_invertible(F, g)) gl.push_back(g);
  });

  struct Sol {
    std::vector<int> flags;
    GFMat g;
  };
  std::vector<Sol> sols;
  std::map<std::string, int> index;
  auto key_of_sol = [&](const Sol& s) {
    std::string k;
    for (int f : s.flags) {
      k.push_back((char)(f & 0xff));
      k.push_back((char)((f >> 8) & 0xff));
    }
    k += gf_key(s.g);
    return k;
  };
  flag_sequences(ft, b, false, [&](const std::vector<int>& s) {
    for (auto& g : gl) {
      if (ft.act(s.back(), g) != s.front()) continue;
      Sol sol{s, g};
      index[key_of_sol(sol)] = (int)sols.size();
      sols.push_back(std::move(sol));
    }
  });

  CylindricalResult res;
  res.orbifold_count = Rational(0);
  std::vector<char> seen(sols.size(), 0);
  BigInt glsize = F.gl_order(n);
  auto gens = gl_generators(F, n);
  for (size_t i = 0; i < sols.size(); ++i) {
    if (seen[i]) continue;
    std::deque<int> queue = {(int)i};
    seen[i] = 1;
    long long orbit = 0;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      ++orbit;
      for (auto& x : gens) {
        Sol ns;
        ns.flags = sols[cur].flags;
        for (auto& f : ns.flags) f = ft.act(f, x);
        ns.g = gf_mul(F, gf_mul(F, x, sols[cur].g), gf_inverse(F, x));
        auto it = index.find(key_of_sol(ns));
        if (it == index.end()) throw std::logic_error("GL image left the cylindrical solutions");
        if (!seen[it->second]) {
          seen[it->second] = 1;
          queue.push_back(it->second);
        }
      }
    }
    BigInt aut = glsize / BigInt(orbit);
    res.class_count++;
    res.aut_histogram[aut.to_string()]++;
    res.orbifold_count += Rational(BigInt(1), aut);
  }
  return res;
}

bool has_zigzag(const FrontDiagram& d) {
  for (int a = 0; a < (int)d.arcs.size(); ++a) {
    int be = d.arcs[a].birth_event, de = d.arcs[a].death_event;
    if (be < 0 || de < 0) continue;
    if (d.word.events[be].kind == EventKind::Crossing ||
        d.word.events[de].kind == EventKind::Crossing)
      continue;
    bool upper_at_birth = false, lower_at_death = false, lower_at_birth = false,
         upper_at_death = false;
    for (const auto& c : d.cusps) {
      if (c.event == be) {
        upper_at_birth = c.upper == a;
        lower_at_birth = c.lower == a;
      }
      if (c.event == de) {
        upper_at_death = c.upper == a;
        lower_at_death = c.lower == a;
      }
    }
    if ((upper_at_birth && lower_at_death) || (lower_at_birth && upper_at_death)) return true;
  }
  return false;
}

bool stabilized_is_empty(const FrontDiagram& d, const FqField& F, int rank) {
  if (!has_zigzag(d)) throw ParseError("front has no cusp zig-zag");
  auto mus = maslov_potentials(d, 2);
  if (mus.empty()) throw std::logic_error("mod-2 potential must exist");
  QuiverModel m = build_quiver_model(d, mus[0], rank, true);
  return enumerate_objects(m, F).classes.empty();
}

}  // namespace lk
