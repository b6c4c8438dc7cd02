#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lk {

enum class EventKind { LeftCusp, RightCusp, Crossing };

struct MorseEvent {
  EventKind kind;
  int level;  // 1-based strand index from the top
};

// Combinatorial encoding of a front diagram: a word of Morse events read
// left to right. Plane fronts start and end with no strands; cylinder
// fronts start and end with `seam` strands glued across the word boundary.
struct MorseWord {
  std::vector<MorseEvent> events;
  bool cylinder = false;
  int seam = 0;
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Validates the running strand count. Throws ParseError on violation,
// reporting the event index and the count at that point.
void validate_word(const MorseWord& w);

// Token format: `u<i>` left cusp, `d<i>` right cusp, `x<i>` crossing,
// optionally prefixed by `cyl <n> ;` for the cylinder ambient.
MorseWord parse_front(const std::string& text);
std::string serialize_front(const MorseWord& w);

// Nested-cusp rainbow closure and seam-glued cylindrical closure of a braid
// word on `strands` strands (letters i or -i for the i-th Artin generator).
struct BraidWord {
  int strands = 1;
  std::vector<int> letters;

  bool positive() const {
    for (int l : letters)
      if (l < 0) return false;
    return true;
  }
  int writhe() const {
    int w = 0;
    for (int l : letters) w += l > 0 ? 1 : -1;
    return w;
  }
};

BraidWord parse_braid(const std::string& text, int strands);
MorseWord rainbow_closure(const BraidWord& b);
MorseWord cylindrical_closure(const BraidWord& b);

}  // namespace lk
