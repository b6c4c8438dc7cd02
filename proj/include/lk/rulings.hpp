#pragma once

#include <map>
#include <vector>

#include "lk/diagram.hpp"

namespace lk {

// A ruling: a switch set together with its eye decomposition. The filling
// surface glues one disk per eye and one band per switch, so chi = n - s.
struct Ruling {
  std::vector<int> switches;  // crossing ids, ascending
  struct Eye {
    int left_cusp = -1, right_cusp = -1;  // cusp ids
    std::vector<int> upper, lower;        // arc ids along each path
  };
  std::vector<Eye> eyes;
  std::vector<int> eye_of_arc;  // arc id -> eye index
  bool graded = true;
  bool normal = true;

  int switch_count() const { return (int)switches.size(); }
  int eye_count() const { return (int)eyes.size(); }
  int euler() const { return eye_count() - switch_count(); }
};

// Exhaustive left-to-right enumeration. Plane fronts only; throws on
// cylinder input. Gradedness is judged against `mu` when required.
std::vector<Ruling> enumerate_rulings(const FrontDiagram& d, bool require_graded,
                                      const MaslovPotential& mu, bool require_normal);

// Generating polynomial sum_R z^{s(R) - n}; the exponent equals -chi of the
// filling surface. (Some of the literature uses chi instead.)
struct RulingPolynomial {
  std::map<int, long long> coeff;  // exponent -> count
  std::string exponent_convention = "s-n = -chi";

  bool operator==(const RulingPolynomial& o) const { return coeff == o.coeff; }
  std::string to_string() const;
};

RulingPolynomial ruling_polynomial(const std::vector<Ruling>& rulings);

}  // namespace lk
