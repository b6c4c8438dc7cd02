#include "lk/morse.hpp"

#include <sstream>

namespace lk {

void validate_word(const MorseWord& w) {
  if (w.cylinder && w.seam < 0) throw ParseError("cylinder seam count must be nonnegative");
  int count = w.cylinder ? w.seam : 0;
  for (size_t i = 0; i < w.events.size(); ++i) {
    const MorseEvent& e = w.events[i];
    if (e.level < 1)
      throw ParseError("event " + std::to_string(i) + ": level must be >= 1");
    switch (e.kind) {
      case EventKind::LeftCusp:
        if (e.level > count + 1)
          throw ParseError("event " + std::to_string(i) + ": left cusp at level " +
                           std::to_string(e.level) + " exceeds strand count " + std::to_string(count));
        count += 2;
        break;
      case EventKind::RightCusp:
        if (e.level + 1 > count)
          throw ParseError("event " + std::to_string(i) + ": right cusp at level " +
                           std::to_string(e.level) + " needs two strands, count is " + std::to_string(count));
        count -= 2;
        break;
      case EventKind::Crossing:
        if (e.level + 1 > count)
          throw ParseError("event " + std::to_string(i) + ": crossing at level " +
                           std::to_string(e.level) + " needs two strands, count is " + std::to_string(count));
        break;
    }
  }
  int want = w.cylinder ? w.seam : 0;
  if (count != want)
    throw ParseError("word ends with strand count " + std::to_string(count) + ", expected " +
                     std::to_string(want));
}

MorseWord parse_front(const std::string& text) {
  MorseWord w;
  std::istringstream in(text);
  std::string tok;
  bool first = true;
  while (in >> tok) {
    if (first && tok == "cyl") {
      w.cylinder = true;
      if (!(in >> w.seam)) throw ParseError("cyl prefix needs a seam strand count");
      std::string semi;
      if (!(in >> semi) || semi != ";") throw ParseError("cyl prefix must end with ';'");
      first = false;
      continue;
    }
    first = false;
    if (tok == ";") continue;
    if (tok.size() < 2 || (tok[0] != 'u' && tok[0] != 'd' && tok[0] != 'x'))
      throw ParseError("malformed token '" + tok + "'");
    int level = 0;
    for (size_t i = 1; i < tok.size(); ++i) {
      if (tok[i] < '0' || tok[i] > '9') throw ParseError("malformed token '" + tok + "'");
      level = level * 10 + (tok[i] - '0');
    }
    EventKind k = tok[0] == 'u'   ? EventKind::LeftCusp
                  : tok[0] == 'd' ? EventKind::RightCusp
                                  : EventKind::Crossing;
    w.events.push_back({k, level});
  }
  validate_word(w);
  return w;
}

std::string serialize_front(const MorseWord& w) {
  std::ostringstream out;
  if (w.cylinder) out << "cyl " << w.seam << " ;";
  bool first = !w.cylinder;
  for (const MorseEvent& e : w.events) {
    if (!first) out << ' ';
    first = false;
    out << (e.kind == EventKind::LeftCusp ? 'u' : e.kind == EventKind::RightCusp ? 'd' : 'x')
        << e.level;
  }
  return out.str();
}

BraidWord parse_braid(const std::string& text, int strands) {
  if (strands < 1) throw ParseError("braid must have at least one strand");
  BraidWord b;
  b.strands = strands;
  std::istringstream in(text);
  int v;
  while (in >> v) {
    if (v == 0 || std::abs(v) > strands - 1)
      throw ParseError("braid letter " + std::to_string(v) + " out of range for " +
                       std::to_string(strands) + " strands");
    b.letters.push_back(v);
  }
  if (!in.eof()) throw ParseError("malformed braid word");
  return b;
}

MorseWord rainbow_closure(const BraidWord& b) {
  if (!b.positive()) throw ParseError("rainbow closure requires a positive braid");
  MorseWord w;
  int n = b.strands;
  // n nested left cusps put the closure arcs on levels 1..n and the braid
  // strands on levels n+1..2n; braid letter i crosses levels n+i, n+i+1.
  for (int i = 1; i <= n; ++i) w.events.push_back({EventKind::LeftCusp, i});
  for (int l : b.letters) w.events.push_back({EventKind::Crossing, n + l});
  for (int i = n; i >= 1; --i) w.events.push_back({EventKind::RightCusp, i});
  validate_word(w);
  return w;
}

MorseWord cylindrical_closure(const BraidWord& b) {
  MorseWord w;
  w.cylinder = true;
  w.seam = b.strands;
  for (int l : b.letters) {
    if (l < 0) throw ParseError("cylindrical closure front requires a positive braid");
    w.events.push_back({EventKind::Crossing, l});
  }
  validate_word(w);
  return w;
}

}  // namespace lk
