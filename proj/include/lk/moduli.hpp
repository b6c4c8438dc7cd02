#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lk/bigint.hpp"
#include "lk/diagram.hpp"
#include "lk/gf.hpp"
#include "lk/rulings.hpp"

namespace lk {

// Constrained quiver model of the microlocal-rank-r objects on a front with
// a two-valued Maslov potential: forced region dimensions, one upward matrix
// per arc, crossing exactness and cusp round-trip constraints.
struct QuiverModel {
  FrontDiagram d;
  int rank = 1;
  std::vector<int> region_dim;  // forced dimension per region
  std::vector<int> arc_mu;      // potential of the arc's strand, mod 2
  bool feasible = true;         // false: some forced dimension is negative
  std::vector<int> var_arcs;    // arcs carrying a nonempty matrix

  int dim_above(int arc) const { return region_dim[d.arcs[arc].above_region]; }
  int dim_below(int arc) const { return region_dim[d.arcs[arc].below_region]; }
};

// Requires a potential valued in {0,1}. Binary Z-valued potentials are the
// paper's setting; allow_mod2 admits the 2-periodic case, used only for the
// vanishing checks on stabilized fronts.
QuiverModel build_quiver_model(const FrontDiagram& d, const MaslovPotential& mu, int rank,
                               bool allow_mod2 = false);

struct SheafObject {
  int p = 2;  // field order
  int rank = 1;
  std::vector<int> region_dim;
  std::map<int, GFMat> arc_maps;  // var arcs only; others are zero/empty
  BigInt aut_order;               // |Aut| in the gauge groupoid
};

struct ModuliSummary {
  long long class_count = 0;
  Rational orbifold_count;            // sum over classes of 1/|Aut|
  std::map<std::string, long long> aut_histogram;  // |Aut| -> class count
};

struct EnumerateOptions {
  long long solution_cap = 200000000;  // raw configuration budget
  int jobs = 1;
};

struct ModuliResult {
  std::vector<SheafObject> classes;  // canonical representatives, sorted
  ModuliSummary summary;
};

ModuliResult enumerate_objects(const QuiverModel& m, const FqField& F,
                               const EnumerateOptions& opt = {});

// Microlocal rank along each arc, computed from the matrices.
std::vector<int> microlocal_rank(const QuiverModel& m, const FqField& F, const SheafObject& o);

// The ruling underlying the unique normal ruling filtration of a rank-one
// object on a rainbow positive braid closure: intersect upward images with
// the top flag and read the switch set off the graded jumps.
std::vector<int> normal_ruling_switches(const QuiverModel& m, const FqField& F,
                                        const SheafObject& o, const BraidWord& b);

struct StratumCount {
  std::vector<int> switches;
  long long class_count = 0;
  Rational orbifold_count;
};

// Per-ruling stratification of the enumerated objects on a rainbow closure.
std::vector<StratumCount> stratified_counts(const QuiverModel& m, const FqField& F,
                                            const ModuliResult& objs, const BraidWord& b,
                                            const std::vector<Ruling>& rulings);

// Independent flag-variety route for rainbow closures of positive braids:
// sequences of complete flags in relative positions given by the braid
// letters, transverse to the top flag at both ends, modulo the Borel.
ModuliResult enumerate_rainbow_flags(const BraidWord& b, const FqField& F);

// Cylindrical closure moduli: flag sequences plus a gluing g in GL_n with
// g F^{w+1} = F^1, modulo simultaneous GL_n.
struct CylindricalResult {
  long long class_count = 0;
  Rational orbifold_count;
  std::map<std::string, long long> aut_histogram;
};
CylindricalResult enumerate_cylindrical(const BraidWord& b, const FqField& F);

// Orbifold count of the open Bott-Samelson space (no gluing), for the
// iterated-bundle sanity identity |Flags| (q-1)^w / |GL_n|.
Rational open_bott_samelson_count(const BraidWord& b, const FqField& F);

// True when the front contains a cusp zig-zag and enumeration over F finds
// no rank >= 1 objects.
bool stabilized_is_empty(const FrontDiagram& d, const FqField& F, int rank = 1);
bool has_zigzag(const FrontDiagram& d);

}  // namespace lk
