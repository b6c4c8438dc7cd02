#include "lk/rulings.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace lk {

namespace {

struct PathState {
  std::vector<int> partner;  // slot -> partner slot
  std::vector<int> eye;      // slot -> eye id
  std::vector<int> side;     // slot -> 0 upper path, 1 lower path
};

struct Enumerator {
  const FrontDiagram& d;
  bool require_graded, require_normal;
  const MaslovPotential& mu;
  std::vector<int> crossing_of_event, cusp_of_event;
  std::vector<Ruling> out;

  // per-DFS bookkeeping
  std::vector<int> switches;
  std::vector<char> sw_graded, sw_normal;
  std::vector<int> eye_of_arc;
  std::vector<std::pair<int, int>> eye_cusps;  // eye -> (left cusp, right cusp)

  Enumerator(const FrontDiagram& d_, bool g, const MaslovPotential& m, bool n)
      : d(d_), require_graded(g), require_normal(n), mu(m) {
    crossing_of_event.assign(d.word.events.size(), -1);
    cusp_of_event.assign(d.word.events.size(), -1);
    for (int i = 0; i < (int)d.crossings.size(); ++i) crossing_of_event[d.crossings[i].event] = i;
    for (int i = 0; i < (int)d.cusps.size(); ++i) cusp_of_event[d.cusps[i].event] = i;
    eye_of_arc.assign(d.arcs.size(), -1);
  }

  static bool intervals_ok(int a1, int a2, int b1, int b2) {
    // normality: the two eye intervals in the vertical strip must be nested
    // or disjoint, never interleaved
    int alo = std::min(a1, a2), ahi = std::max(a1, a2);
    int blo = std::min(b1, b2), bhi = std::max(b1, b2);
    bool interleaved = (alo < blo && blo < ahi && ahi < bhi) || (blo < alo && alo < bhi && bhi < ahi);
    return !interleaved;
  }

  void emit() {
    Ruling r;
    r.switches = switches;
    std::sort(r.switches.begin(), r.switches.end());
    r.eye_of_arc = eye_of_arc;
    r.eyes.resize(eye_cusps.size());
    for (size_t e = 0; e < eye_cusps.size(); ++e) {
      r.eyes[e].left_cusp = eye_cusps[e].first;
      r.eyes[e].right_cusp = eye_cusps[e].second;
    }
    r.graded = std::all_of(sw_graded.begin(), sw_graded.end(), [](char c) { return c != 0; });
    r.normal = std::all_of(sw_normal.begin(), sw_normal.end(), [](char c) { return c != 0; });
    // walk each eye from its left cusp along both sides
    for (size_t e = 0; e < r.eyes.size(); ++e) {
      auto& eye = r.eyes[e];
      const auto& lc = d.cusps[eye.left_cusp];
      auto walk = [&](int arc0, std::vector<int>& path) {
        int arc = arc0;
        while (true) {
          path.push_back(arc);
          int ev = d.arcs[arc].death_event;
          const MorseEvent& me = d.word.events[ev];
          if (me.kind == EventKind::RightCusp) break;
          const auto& c = d.crossings[crossing_of_event[ev]];
          bool switched =
              std::binary_search(r.switches.begin(), r.switches.end(), crossing_of_event[ev]);
          if (arc == c.nw) arc = switched ? c.ne : c.se;
          else arc = switched ? c.se : c.ne;
        }
      };
      walk(lc.upper, eye.upper);
      walk(lc.lower, eye.lower);
    }
    out.push_back(std::move(r));
  }

  void run(int ev, PathState st) {
    if (ev == (int)d.word.events.size()) {
      emit();
      return;
    }
    const MorseEvent& e = d.word.events[ev];
    int p = e.level - 1;
    switch (e.kind) {
      case EventKind::LeftCusp: {
        int cusp = cusp_of_event[ev];
        int eye_id = (int)eye_cusps.size();
        eye_cusps.push_back({cusp, -1});
        PathState ns = st;
        for (auto& x : ns.partner) x += (x >= p) ? 2 : 0;
        ns.partner.insert(ns.partner.begin() + p, {p + 1, p});
        ns.eye.insert(ns.eye.begin() + p, {eye_id, eye_id});
        ns.side.insert(ns.side.begin() + p, {0, 1});
        eye_of_arc[d.cusps[cusp].upper] = eye_id;
        eye_of_arc[d.cusps[cusp].lower] = eye_id;
        run(ev + 1, std::move(ns));
        eye_cusps.pop_back();
        break;
      }
      case EventKind::RightCusp: {
        if (st.partner[p] != p + 1) return;  // paths may only end together
        int cusp = cusp_of_event[ev];
        int eye_id = st.eye[p];
        int prev = eye_cusps[eye_id].second;
        eye_cusps[eye_id].second = cusp;
        PathState ns = st;
        ns.partner.erase(ns.partner.begin() + p, ns.partner.begin() + p + 2);
        for (auto& x : ns.partner) x -= (x > p) ? 2 : 0;
        ns.eye.erase(ns.eye.begin() + p, ns.eye.begin() + p + 2);
        ns.side.erase(ns.side.begin() + p, ns.side.begin() + p + 2);
        run(ev + 1, std::move(ns));
        eye_cusps[eye_id].second = prev;
        break;
      }
      case EventKind::Crossing: {
        int cr = crossing_of_event[ev];
        const auto& c = d.crossings[cr];
        if (st.partner[p] == p + 1) return;  // an eye's two paths never meet
        // pass branch: paths follow the strands through the crossing
        {
          PathState ns = st;
          int q1 = ns.partner[p], q2 = ns.partner[p + 1];
          ns.partner[q1] = p + 1;
          ns.partner[q2] = p;
          std::swap(ns.partner[p], ns.partner[p + 1]);
          std::swap(ns.eye[p], ns.eye[p + 1]);
          std::swap(ns.side[p], ns.side[p + 1]);
          eye_of_arc[c.ne] = ns.eye[p];
          eye_of_arc[c.se] = ns.eye[p + 1];
          run(ev + 1, std::move(ns));
        }
        // switch branch: paths bounce, the band glues the two eyes
        {
          bool graded_here =
              mu.values.empty() ||
              mu.values[d.arcs[c.nw].strand] == mu.values[d.arcs[c.sw].strand];
          if (require_graded && !graded_here) return;
          bool normal_here = intervals_ok(p, st.partner[p], p + 1, st.partner[p + 1]);
          if (require_normal && !normal_here) return;
          PathState ns = st;
          eye_of_arc[c.ne] = ns.eye[p];
          eye_of_arc[c.se] = ns.eye[p + 1];
          switches.push_back(cr);
          sw_graded.push_back(graded_here);
          sw_normal.push_back(normal_here);
          run(ev + 1, std::move(ns));
          switches.pop_back();
          sw_graded.pop_back();
          sw_normal.pop_back();
        }
        break;
      }
    }
  }
};

}  // namespace

std::vector<Ruling> enumerate_rulings(const FrontDiagram& d, bool require_graded,
                                      const MaslovPotential& mu, bool require_normal) {
  if (d.word.cylinder)
    throw ParseError("rulings are defined only for cusped plane fronts");
  Enumerator en(d, require_graded, mu, require_normal);
  en.run(0, PathState{});
  std::set<std::vector<int>> seen;
  for (const auto& r : en.out)
    if (!seen.insert(r.switches).second)
      throw std::logic_error("duplicate switch set in ruling enumeration");
  return en.out;
}

RulingPolynomial ruling_polynomial(const std::vector<Ruling>& rulings) {
  RulingPolynomial p;
  for (const auto& r : rulings) p.coeff[r.switch_count() - r.eye_count()]++;
  return p;
}

std::string RulingPolynomial::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : coeff) {
    if (!first) out << " + ";
    first = false;
    if (c != 1 || e == 0) out << c;
    if (e == 1) out << "z";
    else if (e == -1) out << "z^-1";
    else if (e != 0) out << "z^" << e;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace lk
