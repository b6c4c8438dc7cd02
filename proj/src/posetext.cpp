#include "lk/posetext.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace lk {

namespace {

struct CellUF {
  std::vector<int> up;
  int make() {
    up.push_back((int)up.size());
    return (int)up.size() - 1;
  }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void join(int a, int b) { up[find(a)] = find(b); }
};

}  // namespace

RefinedComplex refine(const FrontDiagram& d) {
  if (d.word.cylinder) throw ParseError("poset refinement implemented for plane fronts");
  RefinedComplex rc;
  CellUF uf;
  struct Raw {
    RefinedComplex::CellKind kind;
    int dim, parent, rho;
  };
  std::vector<Raw> raw;
  auto mk = [&](RefinedComplex::CellKind k, int dim, int parent, int rho) {
    uf.make();
    raw.push_back({k, dim, parent, rho});
    return (int)raw.size() - 1;
  };
  struct RawCover {
    int lower, upper, arc;
  };
  std::vector<RawCover> covers;

  std::vector<int> cusp_of_event(d.word.events.size(), -1),
      cross_of_event(d.word.events.size(), -1);
  for (int i = 0; i < (int)d.cusps.size(); ++i) cusp_of_event[d.cusps[i].event] = i;
  for (int i = 0; i < (int)d.crossings.size(); ++i) cross_of_event[d.crossings[i].event] = i;

  std::vector<int> slot_piece, slot_arc;
  std::vector<int> gap_piece;
  auto region_at = [&](int col, int g) { return d.gap_regions[col][g]; };

  gap_piece.push_back(mk(RefinedComplex::RegionPiece, 2, region_at(0, 0), region_at(0, 0)));

  auto new_arc_piece = [&](int arc, int above_cell, int below_cell) {
    int rho = d.arcs[arc].below_region;
    int p = mk(RefinedComplex::ArcPiece, 1, arc, rho);
    covers.push_back({p, above_cell, arc});
    covers.push_back({p, below_cell, -1});
    return p;
  };

  int E = (int)d.word.events.size();
  for (int e = 0; e < E; ++e) {
    const MorseEvent& ev = d.word.events[e];
    int p = ev.level - 1;
    switch (ev.kind) {
      case EventKind::LeftCusp: {
        const auto& c = d.cusps[cusp_of_event[e]];
        int v = mk(RefinedComplex::CuspV, 0, cusp_of_event[e], c.outside);
        int outer = gap_piece[p];
        int inner = mk(RefinedComplex::RegionPiece, 2, c.inside, c.inside);
        int uP = new_arc_piece(c.upper, outer, inner);
        int lP = new_arc_piece(c.lower, inner, outer);
        covers.push_back({v, uP, c.lower});  // rho jumps O -> I along the lower arc
        covers.push_back({v, lP, -1});
        slot_piece.insert(slot_piece.begin() + p, {uP, lP});
        slot_arc.insert(slot_arc.begin() + p, {c.upper, c.lower});
        gap_piece.insert(gap_piece.begin() + p + 1, {inner, outer});
        break;
      }
      case EventKind::RightCusp: {
        const auto& c = d.cusps[cusp_of_event[e]];
        int v = mk(RefinedComplex::CuspV, 0, cusp_of_event[e], c.outside);
        covers.push_back({v, slot_piece[p], c.lower});
        covers.push_back({v, slot_piece[p + 1], -1});
        uf.join(gap_piece[p], gap_piece[p + 2]);
        slot_piece.erase(slot_piece.begin() + p, slot_piece.begin() + p + 2);
        slot_arc.erase(slot_arc.begin() + p, slot_arc.begin() + p + 2);
        gap_piece.erase(gap_piece.begin() + p + 1, gap_piece.begin() + p + 3);
        break;
      }
      case EventKind::Crossing: {
        const auto& c = d.crossings[cross_of_event[e]];
        int v = mk(RefinedComplex::CrossV, 0, cross_of_event[e], c.rS);
        covers.push_back({v, slot_piece[p], c.sw});  // rho S -> W
        covers.push_back({v, slot_piece[p + 1], -1});
        int ecell = mk(RefinedComplex::RegionPiece, 2, c.rE, c.rE);
        gap_piece[p + 1] = ecell;
        int neP = new_arc_piece(c.ne, gap_piece[p], ecell);
        int seP = new_arc_piece(c.se, ecell, gap_piece[p + 2]);
        covers.push_back({v, neP, c.se});  // rho S -> E
        covers.push_back({v, seP, -1});
        slot_piece[p] = neP;
        slot_piece[p + 1] = seP;
        slot_arc[p] = c.ne;
        slot_arc[p + 1] = c.se;
        break;
      }
    }
    if (e + 1 >= E) continue;
    // vertical slice between events e and e+1 (timeline column e+1)
    int col = e + 1;
    std::vector<int> new_gaps(gap_piece.size());
    std::vector<int> gap_edge(gap_piece.size());
    for (size_t g = 0; g < gap_piece.size(); ++g) {
      int reg = region_at(col, (int)g);
      int ge = mk(RefinedComplex::SliceE, 1, reg, reg);
      int nc = mk(RefinedComplex::RegionPiece, 2, reg, reg);
      covers.push_back({ge, gap_piece[g], -1});
      covers.push_back({ge, nc, -1});
      gap_edge[g] = ge;
      new_gaps[g] = nc;
    }
    std::vector<int> new_pieces(slot_piece.size());
    for (size_t s = 0; s < slot_piece.size(); ++s) {
      int arc = slot_arc[s];
      int sv = mk(RefinedComplex::SliceV, 0, arc, d.arcs[arc].below_region);
      covers.push_back({sv, slot_piece[s], -1});
      covers.push_back({sv, gap_edge[s], arc});
      covers.push_back({sv, gap_edge[s + 1], -1});
      int np = new_arc_piece(arc, new_gaps[s], new_gaps[s + 1]);
      covers.push_back({sv, np, -1});
      new_pieces[s] = np;
    }
    slot_piece = new_pieces;
    gap_piece = new_gaps;
  }

  std::vector<int> id_of(raw.size(), -1);
  for (int i = 0; i < (int)raw.size(); ++i) {
    int r = uf.find(i);
    if (id_of[r] == -1) {
      id_of[r] = (int)rc.cells.size();
      rc.cells.push_back({raw[r].kind, raw[r].dim, raw[r].parent, raw[r].rho});
    }
    id_of[i] = id_of[r];
  }
  std::set<std::tuple<int, int, int>> seen;
  for (auto& cv : covers) {
    int l = id_of[cv.lower], u = id_of[cv.upper];
    if (seen.insert({l, u, cv.arc}).second) rc.covers.push_back({l, u, cv.arc});
  }
  return rc;
}

PosetModule poset_module(const RefinedComplex& rc, const QuiverModel& m, const FqField& F,
                         const SheafObject& o) {
  PosetModule mod;
  mod.p = F.p();
  mod.dim.resize(rc.cells.size());
  for (size_t i = 0; i < rc.cells.size(); ++i) mod.dim[i] = m.region_dim[rc.cells[i].rho_region];
  auto arc_mat = [&](int a) {
    auto it = o.arc_maps.find(a);
    if (it != o.arc_maps.end()) return it->second;
    return GFMat(m.dim_above(a), m.dim_below(a));
  };
  mod.cover_map.reserve(rc.covers.size());
  for (const auto& cv : rc.covers) {
    if (cv.arc < 0) {
      if (mod.dim[cv.lower] != mod.dim[cv.upper])
        throw std::logic_error("identity cover between different dimensions");
      mod.cover_map.push_back(GFMat::identity(mod.dim[cv.lower]));
    } else {
      GFMat mm = arc_mat(cv.arc);
      if (mm.cols != mod.dim[cv.lower] || mm.rows != mod.dim[cv.upper])
        throw std::logic_error("cover map shape mismatch");
      mod.cover_map.push_back(mm);
    }
  }
  return mod;
}

namespace {

struct Rep {
  std::vector<int> dim;
  std::vector<GFMat> cmap;
};

std::vector<std::optional<GFMat>> composites(const RefinedComplex& rc, const FqField& F,
                                             const Rep& R, int from) {
  std::vector<std::optional<GFMat>> out(rc.cells.size());
  out[from] = GFMat::identity(R.dim[from]);
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t ci = 0; ci < rc.covers.size(); ++ci) {
      const auto& cv = rc.covers[ci];
      if (!out[cv.lower]) continue;
      GFMat comp = gf_mul(F, R.cmap[ci], *out[cv.lower]);
      if (!out[cv.upper]) {
        out[cv.upper] = comp;
        grew = true;
      } else if (!(*out[cv.upper] == comp)) {
        throw std::logic_error("poset module is not functorial");
      }
    }
  }
  return out;
}

std::vector<std::vector<char>> reachability(const RefinedComplex& rc) {
  size_t n = rc.cells.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i) reach[i][i] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& cv : rc.covers)
      for (size_t i = 0; i < n; ++i)
        if (reach[i][cv.lower] && !reach[i][cv.upper]) {
          reach[i][cv.upper] = 1;
          grew = true;
        }
  }
  return reach;
}

// column-space basis at each cell of the sum of incoming cover maps
std::vector<GFMat> radical_basis(const RefinedComplex& rc, const FqField& F, const Rep& R) {
  std::vector<std::vector<uint8_t>> cols(rc.cells.size());
  for (size_t ci = 0; ci < rc.covers.size(); ++ci) {
    const auto& cv = rc.covers[ci];
    const GFMat& mm = R.cmap[ci];
    for (int c = 0; c < mm.cols; ++c)
      for (int r = 0; r < mm.rows; ++r) cols[cv.upper].push_back(mm.at(r, c));
  }
  std::vector<GFMat> rad(rc.cells.size());
  for (size_t i = 0; i < rc.cells.size(); ++i) {
    int rows = R.dim[i];
    int nc = rows ? (int)cols[i].size() / rows : 0;
    GFMat t(nc, rows);  // transposed: rows are the incoming image columns
    for (int c = 0; c < nc; ++c)
      for (int r = 0; r < rows; ++r) t.at(c, r) = cols[i][(size_t)c * rows + r];
    gf_rref(F, t);
    int rank = 0;
    for (int r = 0; r < t.rows; ++r) {
      bool nz = false;
      for (int c = 0; c < t.cols; ++c)
        if (t.at(r, c)) nz = true;
      if (nz) ++rank;
    }
    GFMat basis(rows, rank);
    for (int r = 0; r < rank; ++r)
      for (int c = 0; c < rows; ++c) basis.at(c, r) = t.at(r, c);
    rad[i] = basis;
  }
  return rad;
}

}  // namespace

std::vector<int> poset_ext(const RefinedComplex& rc, const FqField& F, const PosetModule& Fm,
                           const PosetModule& Gm, int cap) {
  if (Fm.p != Gm.p) throw std::invalid_argument("poset_ext: field mismatch");
  size_t N = rc.cells.size();
  auto reach = reachability(rc);

  Rep G{Gm.dim, Gm.cover_map};
  std::vector<std::vector<std::optional<GFMat>>> Gcomp(N);
  for (size_t i = 0; i < N; ++i) Gcomp[i] = composites(rc, F, G, (int)i);

  Rep M{Fm.dim, Fm.cover_map};

  struct Level {
    std::vector<int> gen_cell;
    std::vector<std::vector<uint8_t>> dvec;  // previous-P coordinates at gen_cell
  };
  std::vector<Level> levels;
  std::vector<GFMat> prev_kbasis;

  for (int step = 0;; ++step) {
    bool zero = true;
    for (int x : M.dim)
      if (x) zero = false;
    if (zero) break;
    if (step >= cap) throw std::runtime_error("poset_ext: resolution cap exceeded");

    auto rad = radical_basis(rc, F, M);
    Level lv;
    std::vector<GFMat> gen_vecs;
    for (size_t i = 0; i < N; ++i) {
      int dm = M.dim[i];
      if (dm == rad[i].cols) continue;
      GFMat acc = rad[i];
      for (int cand = 0; cand < dm && acc.cols < dm; ++cand) {
        GFMat test(dm, acc.cols + 1);
        for (int r = 0; r < dm; ++r)
          for (int c = 0; c < acc.cols; ++c) test.at(r, c) = acc.at(r, c);
        test.at(cand, acc.cols) = 1;
        if (gf_rank(F, test) == acc.cols + 1) {
          acc = test;
          lv.gen_cell.push_back((int)i);
          GFMat v(dm, 1);
          v.at(cand, 0) = 1;
          gen_vecs.push_back(v);
        }
      }
    }
    if (step > 0) {
      lv.dvec.resize(lv.gen_cell.size());
      for (size_t g = 0; g < lv.gen_cell.size(); ++g) {
        GFMat w = gf_mul(F, prev_kbasis[lv.gen_cell[g]], gen_vecs[g]);
        lv.dvec[g].assign(w.rows, 0);
        for (int r = 0; r < w.rows; ++r) lv.dvec[g][r] = w.at(r, 0);
      }
    }

    int ngen = (int)lv.gen_cell.size();
    auto active = [&](int c) {
      std::vector<int> out;
      for (int g = 0; g < ngen; ++g)
        if (reach[lv.gen_cell[g]][c]) out.push_back(g);
      return out;
    };

    std::vector<const std::vector<std::optional<GFMat>>*> Mcomp(ngen);
    std::map<int, std::vector<std::optional<GFMat>>> cache;
    for (int g = 0; g < ngen; ++g) {
      auto it = cache.find(lv.gen_cell[g]);
      if (it == cache.end())
        it = cache.emplace(lv.gen_cell[g], composites(rc, F, M, lv.gen_cell[g])).first;
      Mcomp[g] = &it->second;
    }

    Rep K;
    K.dim.assign(N, 0);
    std::vector<GFMat> kbasis(N);
    for (size_t c = 0; c < N; ++c) {
      auto act = active((int)c);
      GFMat pi(M.dim[c], (int)act.size());
      for (size_t k = 0; k < act.size(); ++k) {
        GFMat v = gf_mul(F, *(*Mcomp[act[k]])[c], gen_vecs[act[k]]);
        for (int r = 0; r < M.dim[c]; ++r) pi.at(r, (int)k) = v.at(r, 0);
      }
      kbasis[c] = gf_kernel(F, pi);
      K.dim[c] = kbasis[c].cols;
    }
    K.cmap.resize(rc.covers.size());
    for (size_t ci = 0; ci < rc.covers.size(); ++ci) {
      const auto& cv = rc.covers[ci];
      auto actA = active(cv.lower), actB = active(cv.upper);
      GFMat incl((int)actB.size(), (int)actA.size());
      for (size_t a = 0; a < actA.size(); ++a)
        for (size_t b = 0; b < actB.size(); ++b)
          if (actB[b] == actA[a]) incl.at((int)b, (int)a) = 1;
      GFMat img = gf_mul(F, incl, kbasis[cv.lower]);
      GFMat kb = kbasis[cv.upper];
      GFMat w(kb.rows, kb.cols + img.cols);
      for (int r = 0; r < kb.rows; ++r) {
        for (int c = 0; c < kb.cols; ++c) w.at(r, c) = kb.at(r, c);
        for (int c = 0; c < img.cols; ++c) w.at(r, kb.cols + c) = img.at(r, c);
      }
      auto piv = gf_rref(F, w);
      for (int c : piv)
        if (c >= kb.cols) throw std::logic_error("kernel is not closed under the cover maps");
      GFMat X(kb.cols, img.cols);
      for (size_t r = 0; r < piv.size(); ++r)
        for (int c = 0; c < img.cols; ++c) X.at(piv[r], c) = w.at((int)r, kb.cols + c);
      K.cmap[ci] = X;
    }

    levels.push_back(std::move(lv));
    prev_kbasis = std::move(kbasis);
    M = K;
  }

  int L = (int)levels.size();
  std::vector<int> h;
  if (L == 0) return {0, 0, 0};
  auto hom_dim = [&](int i) {
    int t = 0;
    for (int c : levels[i].gen_cell) t += Gm.dim[c];
    return t;
  };
  std::vector<GFMat> delta(L);
  for (int i = 0; i + 1 < L; ++i) {
    const auto& from = levels[i];
    const auto& to = levels[i + 1];
    std::vector<int> from_off(from.gen_cell.size() + 1, 0);
    for (size_t g = 0; g < from.gen_cell.size(); ++g)
      from_off[g + 1] = from_off[g] + Gm.dim[from.gen_cell[g]];
    std::vector<int> to_off(to.gen_cell.size() + 1, 0);
    for (size_t g = 0; g < to.gen_cell.size(); ++g)
      to_off[g + 1] = to_off[g] + Gm.dim[to.gen_cell[g]];
    GFMat D(to_off.back(), from_off.back());
    for (size_t g = 0; g < to.gen_cell.size(); ++g) {
      int cell = to.gen_cell[g];
      std::vector<int> act;
      for (size_t g2 = 0; g2 < from.gen_cell.size(); ++g2)
        if (reach[from.gen_cell[g2]][cell]) act.push_back((int)g2);
      const auto& dv = to.dvec[g];
      if ((int)dv.size() != (int)act.size())
        throw std::logic_error("differential coordinates out of sync");
      for (size_t k = 0; k < act.size(); ++k) {
        if (!dv[k]) continue;
        int g2 = act[k];
        const GFMat& gm = *Gcomp[from.gen_cell[g2]][cell];
        for (int r = 0; r < gm.rows; ++r)
          for (int c = 0; c < gm.cols; ++c) {
            uint8_t coef = F.mul(dv[k], gm.at(r, c));
            if (!coef) continue;
            int out = to_off[g] + r;
            int in = from_off[g2] + c;
            D.at(out, in) = F.add(D.at(out, in), coef);
          }
      }
    }
    delta[i] = D;
  }

  std::vector<int> ranks(L, 0);
  for (int i = 0; i + 1 < L; ++i) ranks[i] = gf_rank(F, delta[i]);
  for (int i = 0; i + 2 < L; ++i) {
    GFMat comp = gf_mul(F, delta[i + 1], delta[i]);
    for (auto v : comp.a)
      if (v) throw std::logic_error("poset resolution differentials do not square to zero");
  }
  h.assign(std::max(3, L), 0);
  for (int i = 0; i < L; ++i) {
    int kerdim = i + 1 < L ? hom_dim(i) - ranks[i] : hom_dim(i);
    int imdim = i > 0 ? ranks[i - 1] : 0;
    h[i] = kerdim - imdim;
  }
  return h;
}

}  // namespace lk
