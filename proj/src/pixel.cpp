#include "lk/pixel.hpp"

#include <algorithm>
#include <stdexcept>

namespace lk {

namespace {

// rectilinear drawing: heights per slot, one event per column, all vertical
// jogs rising so every wall map is the arc's upward generization
struct Drawing {
  struct Vertical {
    int x;
    long long h1, h2;  // h1 < h2
    int arc;
  };
  struct Horizontal {
    int x1, x2;
    long long h;
    int arc;
  };
  std::vector<Vertical> verts;
  std::vector<Horizontal> horiz;
};

Drawing draw(const FrontDiagram& d) {
  if (d.word.cylinder) throw ParseError("pixelation needs a plane front");
  Drawing out;
  struct Live {
    int arc;
    long long h;
    int since;
  };
  std::vector<Live> slots;
  long long HSCALE = 4;

  auto flush = [&](const Live& s, int x) {
    if (x > s.since) out.horiz.push_back({s.since, x, s.h, s.arc});
  };
  auto rescale = [&](long long f) {
    for (auto& s : slots) s.h *= f;
    for (auto& v : out.verts) { v.h1 *= f; v.h2 *= f; }
    for (auto& h : out.horiz) h.h *= f;
    HSCALE *= f;
  };

  const auto& evs = d.word.events;
  std::vector<int> cusp_of_event(evs.size(), -1), cross_of_event(evs.size(), -1);
  for (int i = 0; i < (int)d.cusps.size(); ++i) cusp_of_event[d.cusps[i].event] = i;
  for (int i = 0; i < (int)d.crossings.size(); ++i) cross_of_event[d.crossings[i].event] = i;

  for (int e = 0; e < (int)evs.size(); ++e) {
    int x = e + 1;
    int p = evs[e].level - 1;
    switch (evs[e].kind) {
      case EventKind::LeftCusp: {
        const auto& c = d.cusps[cusp_of_event[e]];
        auto bounds = [&]() {
          long long above = p == 0 ? (slots.empty() ? 4 * HSCALE : slots[0].h + 4 * HSCALE)
                                   : slots[p - 1].h;
          long long below = p == (int)slots.size()
                                ? (slots.empty() ? 0 : slots.back().h - 4 * HSCALE)
                                : slots[p].h;
          return std::make_pair(below, above);
        };
        auto [below, above] = bounds();
        if (above - below < 3) {
          rescale(4);
          std::tie(below, above) = bounds();
        }
        long long h_lo = below + (above - below) / 3;
        long long h_hi = below + 2 * (above - below) / 3;
        if (h_lo <= below) h_lo = below + 1;
        if (h_hi <= h_lo) h_hi = h_lo + 1;
        // cusp point at (x, h_lo); the vertical is part of the upper arc
        out.verts.push_back({x, h_lo, h_hi, c.upper});
        slots.insert(slots.begin() + p, Live{c.upper, h_hi, x});
        slots.insert(slots.begin() + p + 1, Live{c.lower, h_lo, x});
        break;
      }
      case EventKind::RightCusp: {
        const auto& c = d.cusps[cusp_of_event[e]];
        Live A = slots[p], B = slots[p + 1];
        flush(A, x);
        flush(B, x);
        // lower strand rises into the cusp point (x, A.h)
        out.verts.push_back({x, B.h, A.h, c.lower});
        slots.erase(slots.begin() + p, slots.begin() + p + 2);
        break;
      }
      case EventKind::Crossing: {
        const auto& c = d.crossings[cross_of_event[e]];
        auto headroom = [&]() {
          return (p == 0 ? slots[p].h + 4 * HSCALE : slots[p - 1].h) - slots[p].h;
        };
        if (headroom() < 2) rescale(4);
        long long above = p == 0 ? slots[p].h + 4 * HSCALE : slots[p - 1].h;
        Live A = slots[p], B = slots[p + 1];
        flush(A, x);
        flush(B, x);
        long long h_new = A.h + std::max(1LL, (above - A.h) / 2);
        // the rising strand crosses A's run at the lattice point (x, A.h)
        out.verts.push_back({x, B.h, A.h, c.sw});
        out.verts.push_back({x, A.h, h_new, c.ne});
        slots[p] = Live{c.ne, h_new, x};
        slots[p + 1] = Live{c.se, A.h, x};
        break;
      }
    }
  }
  if (!slots.empty()) throw std::logic_error("drawing ended with open strands");
  return out;
}

}  // namespace

PixelLayout pixelate_layout(const QuiverModel& m) {
  Drawing dr = draw(m.d);

  std::vector<long long> hs;
  for (auto& h : dr.horiz) hs.push_back(h.h);
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  auto row_of = [&](long long h) {
    return (int)(std::lower_bound(hs.begin(), hs.end(), h) - hs.begin());
  };

  PixelLayout L;
  int E = (int)m.d.word.events.size();
  L.cols = E + 1;
  L.rows = (int)hs.size() + 1;
  L.vwall.assign(L.cols + 1, std::vector<int>(L.rows + 1, -1));
  L.hwall.assign(L.cols, std::vector<int>(L.rows + 1, -1));
  // square (c, r): x in [c, c+1], heights [r, r+1); the wall under it has
  // height index r, so a horizontal at row t is the bottom of square row t
  for (auto& v : dr.verts) {
    int r1 = row_of(v.h1), r2 = row_of(v.h2);
    for (int r = r1; r < r2; ++r) L.vwall[v.x][r] = v.arc;
  }
  for (auto& h : dr.horiz) {
    int r = row_of(h.h);
    for (int c = h.x1; c < h.x2; ++c) L.hwall[c][r] = h.arc;
  }
  L.strands_below.assign(L.cols, std::vector<int>(L.rows, 0));
  for (int c = 0; c < L.cols; ++c)
    for (int r = 0; r < L.rows; ++r) {
      int acc = r == 0 ? 0 : L.strands_below[c][r - 1];
      if (L.hwall[c][r] >= 0) acc += m.arc_mu[L.hwall[c][r]] == 0 ? m.rank : -m.rank;
      L.strands_below[c][r] = acc;
    }
  return L;
}

GFMat BigradedModule::block(const std::map<std::pair<int, int>, GFMat>& op, int i, int j) const {
  auto it = op.find({i, j});
  if (it != op.end()) return it->second;
  auto di = dim.find({i, j});
  auto key = (&op == &X) ? std::make_pair(i + 1, j) : std::make_pair(i, j + 1);
  auto dj = dim.find(key);
  int rows_to = dj == dim.end() ? 0 : dj->second;
  return GFMat(rows_to, di == dim.end() ? 0 : di->second);
}

BigradedModule pixelate_with_layout(const QuiverModel& m, const FqField& F, const SheafObject& o,
                                    const PixelLayout& L) {
  auto arc_mat = [&](int a) {
    auto it = o.arc_maps.find(a);
    if (it != o.arc_maps.end()) return it->second;
    return GFMat(m.dim_above(a), m.dim_below(a));
  };

  BigradedModule M;
  M.p = F.p();
  auto idx = [&](int c, int r) { return std::make_pair(L.cols - 1 - c, r); };
  for (int c = 0; c < L.cols; ++c)
    for (int r = 0; r < L.rows; ++r)
      if (L.strands_below[c][r] > 0) M.dim[idx(c, r)] = L.strands_below[c][r];

  auto dim_at = [&](int c, int r) {
    if (c < 0 || r < 0 || c >= L.cols || r >= L.rows) return 0;
    return std::max(0, L.strands_below[c][r]);
  };

  for (int c = 0; c < L.cols; ++c)
    for (int r = 0; r < L.rows; ++r) {
      int dhere = dim_at(c, r);
      int dup = dim_at(c, r + 1);
      if (dhere && dup) {
        int arc = L.hwall[c][r + 1];
        GFMat mat = arc >= 0 ? arc_mat(arc) : GFMat::identity(dhere);
        if (mat.rows != dup || mat.cols != dhere)
          throw std::logic_error("pixelation: vertical block shape mismatch");
        M.Y[idx(c, r)] = mat;
      } else if (dhere != dup && L.hwall[c][r + 1] < 0) {
        throw std::logic_error("pixelation: dims jump without a wall");
      }
      int dleft = dim_at(c - 1, r);
      if (dhere && dleft) {
        int arc = L.vwall[c][r];
        GFMat mat = arc >= 0 ? arc_mat(arc) : GFMat::identity(dhere);
        if (mat.rows != dleft || mat.cols != dhere)
          throw std::logic_error("pixelation: horizontal block shape mismatch");
        M.X[idx(c, r)] = mat;
      } else if (dhere != dleft && L.vwall[c][r] < 0) {
        throw std::logic_error("pixelation: dims jump without a vwall");
      }
    }

  for (auto& [k, dv] : M.dim) {
    auto [i, j] = k;
    GFMat xy = gf_mul(F, M.block(M.X, i, j + 1), M.block(M.Y, i, j));
    GFMat yx = gf_mul(F, M.block(M.Y, i + 1, j), M.block(M.X, i, j));
    if (!(xy == yx)) throw std::logic_error("pixelation operators do not commute");
  }
  return M;
}

BigradedModule pixelate(const QuiverModel& m, const FqField& F, const SheafObject& o) {
  return pixelate_with_layout(m, F, o, pixelate_layout(m));
}

namespace {

struct HomSpace {
  std::vector<std::pair<int, int>> keys;
  std::vector<int> offset, rows, cols;
  int total = 0;

  HomSpace(const BigradedModule& M, const BigradedModule& N, int a, int b) {
    for (auto& [k, dm] : M.dim) {
      auto it = N.dim.find({k.first + a, k.second + b});
      if (it == N.dim.end()) continue;
      keys.push_back(k);
      offset.push_back(total);
      rows.push_back(it->second);
      cols.push_back(dm);
      total += it->second * dm;
    }
  }
  int find(int i, int j) const {
    for (size_t t = 0; t < keys.size(); ++t)
      if (keys[t] == std::make_pair(i, j)) return (int)t;
    return -1;
  }
};

// contribution phi -> left * phi * right into the block tto of the target
void add_block(const FqField& F, GFMat& mat, int out_row_base, const HomSpace& from, int tfrom,
               const HomSpace& to, int tto, const GFMat& left, const GFMat& right, bool negate) {
  int rN = to.rows[tto], cN = to.cols[tto];
  int rM = from.rows[tfrom], cM = from.cols[tfrom];
  for (int c2 = 0; c2 < cN; ++c2)
    for (int r2 = 0; r2 < rN; ++r2) {
      int out = out_row_base + to.offset[tto] + c2 * rN + r2;
      for (int c1 = 0; c1 < cM; ++c1)
        for (int r1 = 0; r1 < rM; ++r1) {
          uint8_t coef = F.mul(left.at(r2, r1), right.at(c1, c2));
          if (!coef) continue;
          if (negate) coef = F.neg(coef);
          int in = from.offset[tfrom] + c1 * rM + r1;
          mat.at(out, in) = F.add(mat.at(out, in), coef);
        }
    }
}

}  // namespace

ExtDims koszul_ext(const FqField& F, const BigradedModule& M, const BigradedModule& N) {
  if (M.p != N.p) throw std::invalid_argument("koszul_ext: field mismatch");
  HomSpace H00(M, N, 0, 0), H01(M, N, 0, 1), H10(M, N, 1, 0), H11(M, N, 1, 1);

  auto blkN = [&](bool xop, int i, int j) { return N.block(xop ? N.X : N.Y, i, j); };
  auto blkM = [&](bool xop, int i, int j) { return M.block(xop ? M.X : M.Y, i, j); };

  // d0: phi -> (Y_N phi - phi Y_M, X_N phi - phi X_M)
  GFMat d0(H01.total + H10.total, H00.total);
  for (size_t t = 0; t < H00.keys.size(); ++t) {
    auto [i, j] = H00.keys[t];
    int t01 = H01.find(i, j);
    if (t01 >= 0)
      add_block(F, d0, 0, H00, (int)t, H01, t01, blkN(false, i, j),
                GFMat::identity(H00.cols[t]), false);
    int t10 = H10.find(i, j);
    if (t10 >= 0)
      add_block(F, d0, H01.total, H00, (int)t, H10, t10, blkN(true, i, j),
                GFMat::identity(H00.cols[t]), false);
  }
  for (size_t t01 = 0; t01 < H01.keys.size(); ++t01) {
    auto [i, j] = H01.keys[t01];
    int tsrc = H00.find(i, j + 1);
    if (tsrc >= 0)
      add_block(F, d0, 0, H00, tsrc, H01, (int)t01, GFMat::identity(H01.rows[t01]),
                blkM(false, i, j), true);
  }
  for (size_t t10 = 0; t10 < H10.keys.size(); ++t10) {
    auto [i, j] = H10.keys[t10];
    int tsrc = H00.find(i + 1, j);
    if (tsrc >= 0)
      add_block(F, d0, H01.total, H00, tsrc, H10, (int)t10, GFMat::identity(H10.rows[t10]),
                blkM(true, i, j), true);
  }

  // d1: (alpha, beta) -> X_N alpha - alpha X_M - Y_N beta + beta Y_M
  GFMat d1(H11.total, H01.total + H10.total);
  for (size_t t = 0; t < H01.keys.size(); ++t) {
    auto [i, j] = H01.keys[t];
    int t11 = H11.find(i, j);
    if (t11 >= 0)
      add_block(F, d1, 0, H01, (int)t, H11, t11, blkN(true, i, j + 1),
                GFMat::identity(H01.cols[t]), false);
  }
  for (size_t t11 = 0; t11 < H11.keys.size(); ++t11) {
    auto [i, j] = H11.keys[t11];
    int tsrc = H01.find(i + 1, j);
    if (tsrc >= 0)
      add_block(F, d1, 0, H01, tsrc, H11, (int)t11, GFMat::identity(H11.rows[t11]),
                blkM(true, i, j), true);
  }
  {
    GFMat d1b(std::max(H11.total, 1), std::max(H10.total, 1));
    d1b = GFMat(H11.total, H10.total);
    for (size_t t = 0; t < H10.keys.size(); ++t) {
      auto [i, j] = H10.keys[t];
      int t11 = H11.find(i, j);
      if (t11 >= 0)
        add_block(F, d1b, 0, H10, (int)t, H11, t11, blkN(false, i + 1, j),
                  GFMat::identity(H10.cols[t]), true);
    }
    for (size_t t11 = 0; t11 < H11.keys.size(); ++t11) {
      auto [i, j] = H11.keys[t11];
      int tsrc = H10.find(i, j + 1);
      if (tsrc >= 0)
        add_block(F, d1b, 0, H10, tsrc, H11, (int)t11, GFMat::identity(H11.rows[t11]),
                  blkM(false, i, j), false);
    }
    for (int r = 0; r < H11.total; ++r)
      for (int c = 0; c < H10.total; ++c) d1.at(r, H01.total + c) = d1b.at(r, c);
  }

  GFMat comp = gf_mul(F, d1, d0);
  for (auto v : comp.a)
    if (v) throw std::logic_error("koszul differentials do not compose to zero");

  int r0 = gf_rank(F, d0);
  int r1 = gf_rank(F, d1);
  ExtDims e;
  e.h0 = H00.total - r0;
  e.h1 = (H01.total + H10.total) - r1 - r0;
  e.h2 = H11.total - r1;
  return e;
}

int koszul_euler(const BigradedModule& M, const BigradedModule& N) {
  HomSpace H00(M, N, 0, 0), H01(M, N, 0, 1), H10(M, N, 1, 0), H11(M, N, 1, 1);
  return H00.total - H01.total - H10.total + H11.total;
}

}  // namespace lk
