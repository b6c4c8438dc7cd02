#pragma once

#include <map>
#include <vector>

#include "lk/gf.hpp"
#include "lk/moduli.hpp"

namespace lk {

// Rectilinear drawing of a plane front: every arc is a horizontal run with
// rising vertical jogs at event columns, cusps drawn as corners. Walls
// between unit squares remember the arc crossing them.
struct PixelLayout {
  int cols = 0, rows = 0;
  // vwall[c][r]: arc crossing leftward over the wall between squares
  // (c-1, r) and (c, r), or -1; hwall[c][r]: arc under the wall between
  // (c, r-1) and (c, r), or -1.
  std::vector<std::vector<int>> vwall, hwall;
  std::vector<std::vector<int>> strands_below;  // square -> weighted stalk count
};

PixelLayout pixelate_layout(const QuiverModel& m);

// Finite bigraded module over k[x,y] with commuting degree-(1,0) and (0,1)
// operators; the pushforward of a rank-r object along the pixelation.
struct BigradedModule {
  int p = 2;
  std::map<std::pair<int, int>, int> dim;          // (i, j) -> dimension
  std::map<std::pair<int, int>, GFMat> X, Y;       // blocks from (i,j)
  int total_dim() const {
    int t = 0;
    for (auto& [k, d] : dim) t += d;
    return t;
  }
  GFMat block(const std::map<std::pair<int, int>, GFMat>& op, int i, int j) const;
};

BigradedModule pixelate(const QuiverModel& m, const FqField& F, const SheafObject& o);
BigradedModule pixelate_with_layout(const QuiverModel& m, const FqField& F, const SheafObject& o,
                                    const PixelLayout& layout);

struct ExtDims {
  int h0 = 0, h1 = 0, h2 = 0;
  bool operator==(const ExtDims& o) const { return h0 == o.h0 && h1 == o.h1 && h2 == o.h2; }
};

// Cohomology of Hom(M,N) -> Hom^{(0,1)} + Hom^{(1,0)} -> Hom^{(1,1)} with
// the commutator differentials.
ExtDims koszul_ext(const FqField& F, const BigradedModule& M, const BigradedModule& N);

// Euler characteristic from graded dimensions alone.
int koszul_euler(const BigradedModule& M, const BigradedModule& N);

}  // namespace lk
