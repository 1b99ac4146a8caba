#pragma once
#include <optional>
#include <vector>

#include "covermix/moebius.hpp"
#include "covermix/word.hpp"

namespace covermix {

// One side of the fundamental polygon: a vertical line x = pos or a
// semicircle |z - center| = radius.  `outward(z) > 0` means z lies strictly
// beyond the side (outside the domain); `ret` is the word whose isometry
// brings such points back across the side.
struct PolygonSide {
  bool vertical = true;
  double pos = 0;      // line position, or circle center (on the real axis)
  double radius = 0;   // circles only
  int inside_sign = 1; // verticals: inside is sign*(x - pos) <= 0;
                       // circles: +1 keeps |z-c| >= r, -1 keeps |z-c| <= r
  Word ret;

  double outward(const PointH2& z) const {
    if (vertical) return inside_sign * (z.x - pos);
    double dx = z.x - pos;
    double rr = std::sqrt(dx * dx + z.y * z.y);
    return inside_sign * (radius - rr);
  }
};

struct GroupPresentation {
  int rank = 0;
  std::vector<Moebius> gens;
  std::vector<Word> cusp_words;  // one per cusp
  int genus = 0;
  std::vector<PolygonSide> sides;

  Moebius evaluate(const Word& w) const;
  int cusps() const { return int(cusp_words.size()); }
  bool inside(const PointH2& z, double slack = 1e-12) const;
};

// distinguished marked point used by enumeration and counting
inline PointH2 base_point() { return {0.0, 1.0}; }

// Gauss-Bonnet: 2*pi*(2*genus - 2 + #cusps)
double area(const GroupPresentation& g);

// Full structural validation (determinants, parabolic cusp words, surface
// relation, side pairings land on partner sides).  Throws ErrKind::validation.
void validate(const GroupPresentation& g);

GroupPresentation preset_gamma2();
GroupPresentation preset_punctured_torus();
std::optional<GroupPresentation> preset_by_name(const std::string& name);

}  // namespace covermix
