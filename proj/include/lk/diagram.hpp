#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lk/morse.hpp"

namespace lk {

// Stratified combinatorial model of a front diagram: cusps, crossings, arcs
// and regions with their incidences, strands, oriented components, and the
// classical invariants computed from them.
struct FrontDiagram {
  MorseWord word;

  struct Arc {
    int birth_event = -1;  // -1: born at the cylinder seam
    int death_event = -1;  // -1: dies at the seam (pre-unification bookkeeping)
    int birth_slot = 0;
    int above_region = -1;
    int below_region = -1;
    int strand = -1;
    int component = -1;
    bool forward = true;  // traversal runs left-to-right along this arc
  };
  std::vector<Arc> arcs;

  struct Crossing {
    int event;
    int nw, ne, sw, se;      // arc ids
    int rN, rE, rS, rW;      // region ids
  };
  std::vector<Crossing> crossings;

  struct Cusp {
    int event;
    bool left;
    int upper, lower;        // arc ids
    int inside, outside;     // region ids
    bool down = false;       // orientation enters along the upper strand
  };
  std::vector<Cusp> cusps;

  int n_regions = 0;
  std::vector<int> unbounded;      // plane: one region; cylinder: upper then lower
  int n_strands = 0;
  std::vector<std::vector<int>> strand_arcs;
  int n_components = 0;
  std::vector<std::vector<std::pair<int, bool>>> component_path;  // (arc, rightward?)

  // Sweep timelines: state before event i (index events.size() = final state).
  std::vector<std::vector<int>> slot_arcs;    // arc per strand position
  std::vector<std::vector<int>> gap_regions;  // region per gap, one more entry than slots

  int event_of_crossing(int c) const { return crossings[c].event; }
  int compact_region_count() const { return n_regions - (int)unbounded.size(); }
  bool is_unbounded(int r) const {
    for (int u : unbounded)
      if (u == r) return true;
    return false;
  }
};

FrontDiagram build_complex(const MorseWord& w);

struct ClassicalInvariants {
  int tb = 0;
  int writhe = 0;
  int right_cusps = 0;
  std::vector<int> rot;  // per component
};
ClassicalInvariants classical_invariants(const FrontDiagram& d);

// Maslov potential on strands. modulus 0 means Z-valued.
struct MaslovPotential {
  int modulus = 0;
  std::vector<int> values;  // per strand, canonically shifted per component
  bool binary = false;      // values lie in {0,1}
};

// Empty iff some component's rotation number violates the divisibility
// condition for the modulus. Values are canonical up to per-component shift.
std::vector<MaslovPotential> maslov_potentials(const FrontDiagram& d, int modulus);

enum class MoveKind { R1, R1p, R2, R2p, R3, Slide };

struct MoveSite {
  MoveKind kind;
  bool forward = true;  // R1/R1': insert kink; R2/R2'/R3: left-to-right rewrite
  int position = 0;     // event index where the pattern starts / is inserted
  int level = 1;
};

// Word-level Legendrian Reidemeister move. Throws ParseError when the site
// does not match the move pattern.
MorseWord apply_reidemeister(const MorseWord& w, const MoveSite& site);

// All sites currently applicable to the word, for randomized invariance runs.
std::vector<MoveSite> applicable_moves(const MorseWord& w, bool include_slides = false);

}  // namespace lk
