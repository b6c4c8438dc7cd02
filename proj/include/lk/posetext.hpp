#pragma once

#include <vector>

#include "lk/moduli.hpp"

namespace lk {

// Regular refinement of the front stratification: one vertical slice between
// consecutive events, never through crossings. Cells carry their originating
// front stratum and the covering relations of the face poset.
struct RefinedComplex {
  enum CellKind { CuspV, CrossV, SliceV, ArcPiece, SliceE, RegionPiece };
  struct Cell {
    CellKind kind;
    int dim;
    int parent;      // arc id, region id, cusp id, or crossing id
    int rho_region;  // the region incident below this cell
  };
  struct Cover {
    int lower, upper;
    int arc;  // mediating arc of the generization map, or -1 for identity
  };
  std::vector<Cell> cells;
  std::vector<Cover> covers;
};

RefinedComplex refine(const FrontDiagram& d);

// Functor on the refined poset: a dimension per cell and a matrix per cover.
struct PosetModule {
  int p = 2;
  std::vector<int> dim;
  std::vector<GFMat> cover_map;  // indexed like covers
  int total_dim() const {
    int t = 0;
    for (int x : dim) t += x;
    return t;
  }
};

PosetModule poset_module(const RefinedComplex& rc, const QuiverModel& m, const FqField& F,
                         const SheafObject& o);

// Ext over the incidence algebra via iterated projective covers. Returns the
// dims (h^0, h^1, ...) up to the last nonzero entry plus one.
std::vector<int> poset_ext(const RefinedComplex& rc, const FqField& F, const PosetModule& Fm,
                           const PosetModule& Gm, int cap = 12);

}  // namespace lk
