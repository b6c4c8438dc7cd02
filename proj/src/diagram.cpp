#include "lk/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lk {

namespace {

struct UnionFind {
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

FrontDiagram build_complex(const MorseWord& w) {
  validate_word(w);
  FrontDiagram d;
  d.word = w;

  UnionFind regions;
  UnionFind arcids;  // seam unification on the cylinder

  struct RawArc {
    int birth_event, birth_slot, above, below;
    int death_event = -1;
  };
  std::vector<RawArc> raw;

  auto new_arc = [&](int ev, int slot, int above, int below) {
    arcids.make();
    raw.push_back({ev, slot, above, below});
    return (int)raw.size() - 1;
  };

  std::vector<int> slots;  // arc id per strand position, top to bottom
  std::vector<int> gaps;   // region node per gap, gaps.size() == slots.size()+1

  std::vector<int> seam_arcs;
  if (w.cylinder) {
    gaps.push_back(regions.make());
    for (int k = 0; k < w.seam; ++k) {
      int below = regions.make();
      int a = new_arc(-1, k, gaps.back(), below);
      slots.push_back(a);
      gaps.push_back(below);
      seam_arcs.push_back(a);
    }
  } else {
    gaps.push_back(regions.make());
  }

  std::vector<std::vector<int>> slot_trace, gap_trace;
  for (int ev = 0; ev < (int)w.events.size(); ++ev) {
    slot_trace.push_back(slots);
    gap_trace.push_back(gaps);
    const MorseEvent& e = w.events[ev];
    int p = e.level - 1;
    switch (e.kind) {
      case EventKind::LeftCusp: {
        int outside = gaps[p];
        int inside = regions.make();
        int aU = new_arc(ev, p, outside, inside);
        int aD = new_arc(ev, p + 1, inside, outside);
        slots.insert(slots.begin() + p, {aU, aD});
        gaps.insert(gaps.begin() + p + 1, {inside, outside});
        d.cusps.push_back({ev, true, aU, aD, inside, outside});
        break;
      }
      case EventKind::RightCusp: {
        int aU = slots[p], aD = slots[p + 1];
        raw[aU].death_event = ev;
        raw[aD].death_event = ev;
        int inside = gaps[p + 1];
        regions.join(gaps[p], gaps[p + 2]);
        d.cusps.push_back({ev, false, aU, aD, inside, regions.find(gaps[p])});
        slots.erase(slots.begin() + p, slots.begin() + p + 2);
        gaps.erase(gaps.begin() + p + 1, gaps.begin() + p + 3);
        break;
      }
      case EventKind::Crossing: {
        int aNW = slots[p], aSW = slots[p + 1];
        raw[aNW].death_event = ev;
        raw[aSW].death_event = ev;
        int west = gaps[p + 1];
        int east = regions.make();
        gaps[p + 1] = east;
        int aNE = new_arc(ev, p, gaps[p], east);
        int aSE = new_arc(ev, p + 1, east, gaps[p + 2]);
        slots[p] = aNE;
        slots[p + 1] = aSE;
        d.crossings.push_back({ev, aNW, aNE, aSW, aSE, gaps[p], east, gaps[p + 2], west});
        break;
      }
    }
  }

  slot_trace.push_back(slots);
  gap_trace.push_back(gaps);

  if (w.cylinder) {
    // Region nodes 0..seam are the initial gaps by construction order; glue
    // them to the final gaps across the seam.
    for (int k = 0; k <= w.seam; ++k) regions.join(k, gaps[k]);
    for (int k = 0; k < w.seam; ++k) {
      raw[slots[k]].death_event = -1;
      arcids.join(slots[k], seam_arcs[k]);
    }
  }

  // Collapse seam-identified arcs: representative keeps the final birth and
  // the initial death so traversal sees one arc crossing the seam.
  std::vector<int> arc_of_raw(raw.size(), -1);
  for (int i = 0; i < (int)raw.size(); ++i) {
    int r = arcids.find(i);
    if (arc_of_raw[r] == -1) {
      FrontDiagram::Arc a;
      a.above_region = raw[r].above;
      a.below_region = raw[r].below;
      a.birth_event = raw[r].birth_event;
      a.death_event = raw[r].death_event;
      a.birth_slot = raw[r].birth_slot;
      d.arcs.push_back(a);
      arc_of_raw[r] = (int)d.arcs.size() - 1;
    }
    arc_of_raw[i] = arc_of_raw[r];
  }
  if (w.cylinder) {
    for (int k = 0; k < w.seam; ++k) {
      int id = arc_of_raw[seam_arcs[k]];
      // stub pair (initial, final): birth from the final piece, death from the initial
      int fin = -1;
      for (int i = 0; i < (int)raw.size(); ++i)
        if (arc_of_raw[i] == id && i != seam_arcs[k]) fin = i;
      if (fin >= 0) {
        d.arcs[id].birth_event = raw[fin].birth_event;
        d.arcs[id].birth_slot = raw[fin].birth_slot;
        d.arcs[id].death_event = raw[seam_arcs[k]].death_event;
      } else {
        d.arcs[id].birth_event = -1;
        d.arcs[id].death_event = -1;  // closed circle around the seam
      }
    }
  }

  auto remap = [&](int& x) { x = arc_of_raw[x]; };
  for (auto& c : d.crossings) { remap(c.nw); remap(c.ne); remap(c.sw); remap(c.se); }
  for (auto& c : d.cusps) { remap(c.upper); remap(c.lower); }

  // Region numbering: compress union-find classes.
  std::map<int, int> region_id;
  auto rid = [&](int node) {
    int r = regions.find(node);
    auto it = region_id.find(r);
    if (it != region_id.end()) return it->second;
    int id = (int)region_id.size();
    region_id[r] = id;
    return id;
  };
  if (w.cylinder) {
    d.unbounded.push_back(rid(0));                 // upper (z >> 0)
    d.unbounded.push_back(rid(regions.find(w.seam)));  // lower (z << 0)
  } else {
    d.unbounded.push_back(rid(0));
  }
  for (auto& a : d.arcs) { a.above_region = rid(a.above_region); a.below_region = rid(a.below_region); }
  for (auto& c : d.crossings) { c.rN = rid(c.rN); c.rE = rid(c.rE); c.rS = rid(c.rS); c.rW = rid(c.rW); }
  for (auto& c : d.cusps) { c.inside = rid(c.inside); c.outside = rid(c.outside); }

  d.slot_arcs = slot_trace;
  for (auto& vs : d.slot_arcs)
    for (auto& a : vs) a = arc_of_raw[a];
  d.gap_regions = gap_trace;
  for (auto& vg : d.gap_regions)
    for (auto& g : vg) g = rid(g);
  d.n_regions = (int)region_id.size();

  // Strands: arcs glued straight through crossings.
  UnionFind strands;
  for (size_t i = 0; i < d.arcs.size(); ++i) strands.make();
  for (const auto& c : d.crossings) { strands.join(c.nw, c.se); strands.join(c.sw, c.ne); }
  std::map<int, int> strand_id;
  for (int i = 0; i < (int)d.arcs.size(); ++i) {
    int r = strands.find(i);
    auto it = strand_id.find(r);
    int id = it != strand_id.end() ? it->second : (strand_id[r] = (int)strand_id.size());
    d.arcs[i].strand = id;
  }
  d.n_strands = (int)strand_id.size();
  d.strand_arcs.assign(d.n_strands, {});
  for (int i = 0; i < (int)d.arcs.size(); ++i) d.strand_arcs[d.arcs[i].strand].push_back(i);

  // Components and orientations: trace the curve. Moving right along an arc
  // we reach its death event; crossings continue straight, right cusps
  // u-turn. Moving left we reach the birth event symmetrically.
  auto step = [&](int arc, bool rightward) -> std::pair<int, bool> {
    int ev = rightward ? d.arcs[arc].death_event : d.arcs[arc].birth_event;
    if (ev == -1) return {arc, rightward};  // closed seam circle
    const MorseEvent& e = w.events[ev];
    if (e.kind == EventKind::Crossing) {
      for (const auto& c : d.crossings) {
        if (c.event != ev) continue;
        if (rightward) {
          if (c.nw == arc) return {c.se, true};
          if (c.sw == arc) return {c.ne, true};
        } else {
          if (c.se == arc) return {c.nw, false};
          if (c.ne == arc) return {c.sw, false};
        }
      }
    } else {
      for (const auto& c : d.cusps) {
        if (c.event != ev) continue;
        if (c.upper == arc) return {c.lower, !rightward};
        if (c.lower == arc) return {c.upper, !rightward};
      }
    }
    throw std::logic_error("traversal: event does not list the arc");
  };

  std::vector<int> comp(d.arcs.size(), -1);
  // deterministic seed order: topmost-leftmost arc of each component first
  std::vector<int> order(d.arcs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (d.arcs[x].birth_event != d.arcs[y].birth_event) return d.arcs[x].birth_event < d.arcs[y].birth_event;
    return d.arcs[x].birth_slot < d.arcs[y].birth_slot;
  });
  for (int seed : order) {
    if (comp[seed] != -1) continue;
    int cid = d.n_components++;
    d.component_path.emplace_back();
    int arc = seed;
    bool dir = true;  // seed oriented rightward
    while (true) {
      comp[arc] = cid;
      d.arcs[arc].component = cid;
      d.arcs[arc].forward = dir;
      d.component_path[cid].push_back({arc, dir});
      auto nx = step(arc, dir);
      arc = nx.first;
      dir = nx.second;
      if (arc == seed && dir) break;
    }
  }

  // Cusp up/down per orientation: down iff the traversal enters the cusp
  // along the upper strand.
  for (auto& c : d.cusps) {
    bool upper_in = c.left ? !d.arcs[c.upper].forward : d.arcs[c.upper].forward;
    c.down = upper_in;
  }

  return d;
}

ClassicalInvariants classical_invariants(const FrontDiagram& d) {
  ClassicalInvariants inv;
  for (const auto& c : d.crossings) {
    int e_desc = d.arcs[c.nw].forward ? 1 : -1;
    int e_asc = d.arcs[c.sw].forward ? 1 : -1;
    inv.writhe += e_desc * e_asc;
  }
  for (const auto& c : d.cusps)
    if (!c.left) inv.right_cusps++;
  inv.tb = inv.writhe - inv.right_cusps;
  inv.rot.assign(d.n_components, 0);
  for (const auto& c : d.cusps) {
    int comp = d.arcs[c.upper].component;
    inv.rot[comp] += c.down ? 1 : -1;
  }
  for (auto& r : inv.rot) r /= 2;
  return inv;
}

std::vector<MaslovPotential> maslov_potentials(const FrontDiagram& d, int modulus) {
  // Constraint graph on strands: mu(upper) = mu(lower) + 1 at every cusp.
  int n = d.n_strands;
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (other, offset other-this)
  for (const auto& c : d.cusps) {
    int u = d.arcs[c.upper].strand, l = d.arcs[c.lower].strand;
    adj[l].push_back({u, 1});
    adj[u].push_back({l, -1});
  }
  std::vector<int> val(n, 0);
  std::vector<int> seen(n, 0);
  bool consistent = true;
  std::vector<std::vector<int>> groups;
  for (int s = 0; s < n && consistent; ++s) {
    if (seen[s]) continue;
    groups.emplace_back();
    std::vector<int> stack = {s};
    seen[s] = 1;
    val[s] = 0;
    while (!stack.empty() && consistent) {
      int x = stack.back();
      stack.pop_back();
      groups.back().push_back(x);
      for (auto [y, off] : adj[x]) {
        int vy = val[x] + off;
        if (!seen[y]) {
          seen[y] = 1;
          val[y] = vy;
          stack.push_back(y);
        } else {
          int diff = val[y] - vy;
          if (modulus == 0 ? diff != 0 : diff % modulus != 0) consistent = false;
        }
      }
    }
  }
  if (!consistent) return {};

  MaslovPotential mp;
  mp.modulus = modulus;
  mp.values.assign(n, 0);
  bool binary = true;
  for (const auto& g : groups) {
    int lo = val[g[0]], hi = val[g[0]];
    for (int s : g) { lo = std::min(lo, val[s]); hi = std::max(hi, val[s]); }
    for (int s : g) {
      int v = val[s] - lo;
      if (modulus != 0) v = ((v % modulus) + modulus) % modulus;
      mp.values[s] = v;
    }
    if (hi - lo > 1) binary = false;
  }
  if (modulus != 0 && modulus <= 2) {
    // mod-2 values are always in {0,1}
    binary = true;
    for (int s = 0; s < n; ++s) binary = binary && mp.values[s] <= 1;
  }
  mp.binary = binary;
  return {mp};
}

namespace {

// Level renumbering an event applies to the levels of later events.
int shift_level_after(const MorseEvent& e, int level) {
  switch (e.kind) {
    case EventKind::LeftCusp: return level >= e.level ? level + 2 : level;
    case EventKind::RightCusp: return level >= e.level + 2 ? level - 2 : level;
    case EventKind::Crossing: return level;
  }
  return level;
}

int unshift_level_after(const MorseEvent& e, int level, bool& ok) {
  ok = true;
  switch (e.kind) {
    case EventKind::LeftCusp:
      if (level >= e.level + 2) return level - 2;
      if (level >= e.level) { ok = false; return level; }  // touches the inserted pair
      return level;
    case EventKind::RightCusp:
      if (level >= e.level) return level + 2;
      return level;
    case EventKind::Crossing: return level;
  }
  return level;
}

bool spans_disjoint(int a, int b) { return b + 1 < a || b > a + 1; }

MorseEvent ev(EventKind k, int l) { return {k, l}; }

}  // namespace

MorseWord apply_reidemeister(const MorseWord& w, const MoveSite& s) {
  MorseWord out = w;
  auto& es = out.events;
  int pos = s.position;
  int i = s.level;
  auto need = [&](bool c, const char* msg) {
    if (!c) throw ParseError(std::string("move does not match: ") + msg);
  };
  switch (s.kind) {
    case MoveKind::R1: {
      std::vector<MorseEvent> kink = {ev(EventKind::LeftCusp, i + 1), ev(EventKind::Crossing, i),
                                      ev(EventKind::RightCusp, i + 1)};
      if (s.forward) {
        need(pos >= 0 && pos <= (int)es.size(), "position");
        es.insert(es.begin() + pos, kink.begin(), kink.end());
      } else {
        need(pos + 3 <= (int)es.size(), "pattern length");
        for (int k = 0; k < 3; ++k)
          need(es[pos + k].kind == kink[k].kind && es[pos + k].level == kink[k].level, "R1 pattern");
        es.erase(es.begin() + pos, es.begin() + pos + 3);
      }
      break;
    }
    case MoveKind::R1p: {
      std::vector<MorseEvent> kink = {ev(EventKind::LeftCusp, i), ev(EventKind::Crossing, i + 1),
                                      ev(EventKind::RightCusp, i)};
      if (s.forward) {
        es.insert(es.begin() + pos, kink.begin(), kink.end());
      } else {
        need(pos + 3 <= (int)es.size(), "pattern length");
        for (int k = 0; k < 3; ++k)
          need(es[pos + k].kind == kink[k].kind && es[pos + k].level == kink[k].level, "R1' pattern");
        es.erase(es.begin() + pos, es.begin() + pos + 3);
      }
      break;
    }
    case MoveKind::R2: {
      // cusp tip passes through a transverse strand: u_{i+1} <-> u_i x_{i+1} x_i
      // (strand above the tip) and u_i <-> u_{i+1} x_i x_{i+1} (strand below)
      if (s.forward) {
        need(pos < (int)es.size() && es[pos].kind == EventKind::LeftCusp, "R2 needs a left cusp");
        int L = es[pos].level;
        std::vector<MorseEvent> rep;
        if (L == i + 1)
          rep = {ev(EventKind::LeftCusp, i), ev(EventKind::Crossing, i + 1), ev(EventKind::Crossing, i)};
        else if (L == i)
          rep = {ev(EventKind::LeftCusp, i + 1), ev(EventKind::Crossing, i), ev(EventKind::Crossing, i + 1)};
        else
          need(false, "R2 level");
        es.erase(es.begin() + pos);
        es.insert(es.begin() + pos, rep.begin(), rep.end());
      } else {
        need(pos + 3 <= (int)es.size(), "pattern length");
        need(es[pos].kind == EventKind::LeftCusp && es[pos + 1].kind == EventKind::Crossing &&
                 es[pos + 2].kind == EventKind::Crossing,
             "R2 pattern");
        int a = es[pos].level, b = es[pos + 1].level, c = es[pos + 2].level;
        MorseEvent rep{EventKind::LeftCusp, 0};
        if (a == i && b == i + 1 && c == i) rep.level = i + 1;
        else if (a == i + 1 && b == i && c == i + 1) rep.level = i;
        else need(false, "R2 pattern levels");
        es.erase(es.begin() + pos, es.begin() + pos + 3);
        es.insert(es.begin() + pos, rep);
      }
      break;
    }
    case MoveKind::R2p: {
      // mirrored form: d_{i+1} <-> x_i x_{i+1} d_i and d_i <-> x_{i+1} x_i d_{i+1}
      if (s.forward) {
        need(pos < (int)es.size() && es[pos].kind == EventKind::RightCusp, "R2' needs a right cusp");
        int L = es[pos].level;
        std::vector<MorseEvent> rep;
        if (L == i + 1)
          rep = {ev(EventKind::Crossing, i), ev(EventKind::Crossing, i + 1), ev(EventKind::RightCusp, i)};
        else if (L == i)
          rep = {ev(EventKind::Crossing, i + 1), ev(EventKind::Crossing, i), ev(EventKind::RightCusp, i + 1)};
        else
          need(false, "R2' level");
        es.erase(es.begin() + pos);
        es.insert(es.begin() + pos, rep.begin(), rep.end());
      } else {
        need(pos + 3 <= (int)es.size(), "pattern length");
        need(es[pos].kind == EventKind::Crossing && es[pos + 1].kind == EventKind::Crossing &&
                 es[pos + 2].kind == EventKind::RightCusp,
             "R2' pattern");
        int a = es[pos].level, b = es[pos + 1].level, c = es[pos + 2].level;
        MorseEvent rep{EventKind::RightCusp, 0};
        if (a == i && b == i + 1 && c == i) rep.level = i + 1;
        else if (a == i + 1 && b == i && c == i + 1) rep.level = i;
        else need(false, "R2' pattern levels");
        es.erase(es.begin() + pos, es.begin() + pos + 3);
        es.insert(es.begin() + pos, rep);
      }
      break;
    }
    case MoveKind::R3: {
      need(pos + 3 <= (int)es.size(), "pattern length");
      int lo = s.forward ? i : i + 1;
      int hi = s.forward ? i + 1 : i;
      need(es[pos].kind == EventKind::Crossing && es[pos + 1].kind == EventKind::Crossing &&
               es[pos + 2].kind == EventKind::Crossing,
           "R3 needs three crossings");
      need(es[pos].level == lo && es[pos + 1].level == hi && es[pos + 2].level == lo, "R3 pattern");
      es[pos].level = hi;
      es[pos + 1].level = lo;
      es[pos + 2].level = hi;
      break;
    }
    case MoveKind::Slide: {
      need(pos + 2 <= (int)es.size(), "pattern length");
      MorseEvent e1 = es[pos], e2 = es[pos + 1];
      bool ok = true;
      int b_pre = unshift_level_after(e1, e2.level, ok);
      need(ok, "slide: dependent events");
      need(spans_disjoint(e1.level, b_pre), "slide: overlapping spans");
      MorseEvent ne2 = {e2.kind, b_pre};
      MorseEvent ne1 = {e1.kind, shift_level_after(ne2, e1.level)};
      es[pos] = ne2;
      es[pos + 1] = ne1;
      break;
    }
  }
  validate_word(out);
  return out;
}

std::vector<MoveSite> applicable_moves(const MorseWord& w, bool include_slides) {
  std::vector<MoveSite> sites;
  // running strand count before each position
  std::vector<int> count(w.events.size() + 1);
  count[0] = w.cylinder ? w.seam : 0;
  for (size_t i = 0; i < w.events.size(); ++i) {
    int delta = w.events[i].kind == EventKind::LeftCusp    ? 2
                : w.events[i].kind == EventKind::RightCusp ? -2
                                                           : 0;
    count[i + 1] = count[i] + delta;
  }
  auto kind_at = [&](int pos) { return w.events[pos].kind; };
  auto lev_at = [&](int pos) { return w.events[pos].level; };

  for (int pos = 0; pos <= (int)w.events.size(); ++pos) {
    for (int lvl = 1; lvl <= count[pos]; ++lvl) {
      sites.push_back({MoveKind::R1, true, pos, lvl});
      sites.push_back({MoveKind::R1p, true, pos, lvl});
    }
  }
  for (int pos = 0; pos + 3 <= (int)w.events.size(); ++pos) {
    if (kind_at(pos) == EventKind::LeftCusp && kind_at(pos + 1) == EventKind::Crossing &&
        kind_at(pos + 2) == EventKind::RightCusp) {
      if (lev_at(pos) == lev_at(pos + 2) && lev_at(pos + 1) == lev_at(pos) - 1 && lev_at(pos) >= 2)
        sites.push_back({MoveKind::R1, false, pos, lev_at(pos + 1)});
      if (lev_at(pos) == lev_at(pos + 2) && lev_at(pos + 1) == lev_at(pos) + 1)
        sites.push_back({MoveKind::R1p, false, pos, lev_at(pos)});
    }
  }
  for (int pos = 0; pos < (int)w.events.size(); ++pos) {
    if (kind_at(pos) == EventKind::LeftCusp) {
      int L = lev_at(pos);
      if (L >= 2) sites.push_back({MoveKind::R2, true, pos, L - 1});       // strand above the tip
      if (count[pos] >= L) sites.push_back({MoveKind::R2, true, pos, L});  // strand below
    }
    if (kind_at(pos) == EventKind::RightCusp) {
      int L = lev_at(pos);
      if (L >= 2) sites.push_back({MoveKind::R2p, true, pos, L - 1});
      if (count[pos] >= L + 2) sites.push_back({MoveKind::R2p, true, pos, L});
    }
  }
  for (int pos = 0; pos + 3 <= (int)w.events.size(); ++pos) {
    if (kind_at(pos) == EventKind::LeftCusp && kind_at(pos + 1) == EventKind::Crossing &&
        kind_at(pos + 2) == EventKind::Crossing) {
      int a = lev_at(pos), b = lev_at(pos + 1), c = lev_at(pos + 2);
      if (b == a + 1 && c == a) sites.push_back({MoveKind::R2, false, pos, a});
      if (b == a - 1 && c == a && a >= 2) sites.push_back({MoveKind::R2, false, pos, a - 1});
    }
    if (kind_at(pos) == EventKind::Crossing && kind_at(pos + 1) == EventKind::Crossing &&
        kind_at(pos + 2) == EventKind::RightCusp) {
      int a = lev_at(pos), b = lev_at(pos + 1), c = lev_at(pos + 2);
      if (b == a + 1 && c == a) sites.push_back({MoveKind::R2p, false, pos, a});
      if (b == a - 1 && c == a && a >= 2) sites.push_back({MoveKind::R2p, false, pos, a - 1});
    }
  }
  if (include_slides) {
    for (int pos = 0; pos + 2 <= (int)w.events.size(); ++pos) {
      bool ok = true;
      int b_pre = unshift_level_after(w.events[pos], w.events[pos + 1].level, ok);
      if (ok && spans_disjoint(w.events[pos].level, b_pre))
        sites.push_back({MoveKind::Slide, true, pos, 0});
    }
  }
  for (int pos = 0; pos + 3 <= (int)w.events.size(); ++pos) {
    if (kind_at(pos) == EventKind::Crossing && kind_at(pos + 1) == EventKind::Crossing &&
        kind_at(pos + 2) == EventKind::Crossing) {
      int a = lev_at(pos), b = lev_at(pos + 1), c = lev_at(pos + 2);
      if (a == c && b == a + 1) sites.push_back({MoveKind::R3, true, pos, a});
      if (a == c && b == a - 1) sites.push_back({MoveKind::R3, false, pos, b});
    }
  }
  std::vector<MoveSite> valid;
  for (const auto& s : sites) {
    try {
      apply_reidemeister(w, s);
      valid.push_back(s);
    } catch (const ParseError&) {
    }
  }
  return valid;
}

}  // namespace lk
