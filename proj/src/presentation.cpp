#include "covermix/presentation.hpp"

#include <cmath>

namespace covermix {

Moebius GroupPresentation::evaluate(const Word& w) const {
  MatZ acc = MatZ::identity();
  for (auto l : w.letters()) {
    const MatZ& g = gens.at(l.gen).m;
    acc = acc * (l.sign > 0 ? g : g.inverse());
  }
  return Moebius(acc);
}

bool GroupPresentation::inside(const PointH2& z, double slack) const {
  for (const auto& s : sides)
    if (s.outward(z) > slack) return false;
  return true;
}

double area(const GroupPresentation& g) {
  double chi = 2.0 - 2.0 * g.genus - g.cusps();
  require(chi < 0, ErrKind::validation,
          "surface is not finite-volume hyperbolic (chi >= 0)");
  return -2.0 * M_PI * chi;
}

namespace {

bool on_side(const PolygonSide& s, const PointH2& z, double tol) {
  if (s.vertical) return std::abs(z.x - s.pos) < tol;
  double dx = z.x - s.pos;
  return std::abs(std::sqrt(dx * dx + z.y * z.y) - s.radius) < tol;
}

std::vector<PointH2> side_samples(const PolygonSide& s) {
  std::vector<PointH2> pts;
  if (s.vertical) {
    for (double y : {0.71, 1.0, 1.73, 3.9}) pts.push_back({s.pos, y});
  } else {
    for (double t : {0.3, 0.9, 1.57, 2.2, 2.9})
      pts.push_back({s.pos + s.radius * std::cos(t), s.radius * std::sin(t)});
  }
  return pts;
}

}  // namespace

void validate(const GroupPresentation& g) {
  require(g.rank == int(g.gens.size()), ErrKind::validation,
          "rank does not match generator count");
  require(g.rank >= 1, ErrKind::validation, "need at least one generator");
  for (const auto& m : g.gens)
    require(m.unit_det(), ErrKind::validation, "generator determinant != 1");
  require(!g.cusp_words.empty(), ErrKind::validation, "need at least one cusp");
  for (const auto& w : g.cusp_words) {
    require(!w.empty(), ErrKind::validation, "empty cusp word");
    require(classify(g.evaluate(w)) == IsomClass::parabolic, ErrKind::validation,
            "cusp word is not parabolic: " + w.str());
  }
  require(2 * g.genus <= g.rank, ErrKind::validation, "genus too large for rank");

  // surface relation: product of cusp words equals the product of the genus
  // commutators [g1,g2][g3,g4]... as a free word
  Word rel;
  for (const auto& w : g.cusp_words) rel = rel * w;
  Word comm;
  for (int i = 0; i + 1 < 2 * g.genus; i += 2) {
    Word a, b;
    a.push(Letter{std::int8_t(i), 1});
    b.push(Letter{std::int8_t(i + 1), 1});
    comm = comm * a * b * a.inverse() * b.inverse();
  }
  require((rel * comm.inverse()).empty(), ErrKind::validation,
          "cusp words do not satisfy the surface relation");

  // area must be positive (Gauss-Bonnet)
  (void)area(g);

  // each side's return isometry must carry the side onto another side
  for (const auto& s : g.sides) {
    require(!s.ret.empty(), ErrKind::validation, "side without pairing word");
    Moebius m = g.evaluate(s.ret);
    for (const auto& z : side_samples(s)) {
      PointH2 w = apply(m, z);
      bool hit = false;
      for (const auto& s2 : g.sides) hit = hit || on_side(s2, w, 1e-9);
      require(hit, ErrKind::validation,
              "side pairing does not map onto a partner side");
    }
  }
}

GroupPresentation preset_gamma2() {
  GroupPresentation g;
  g.rank = 2;
  g.gens = {Moebius(1, 2, 0, 1), Moebius(1, 0, 2, 1)};
  Word a = Word::from_indices({1}, 2);
  Word b = Word::from_indices({2}, 2);
  g.cusp_words = {a, b.inverse(), b * a.inverse()};
  g.genus = 0;
  g.sides = {
      {true, 1.0, 0, +1, a.inverse()},
      {true, -1.0, 0, -1, a},
      {false, 0.5, 0.5, +1, b.inverse()},
      {false, -0.5, 0.5, +1, b},
  };
  return g;
}

GroupPresentation preset_punctured_torus() {
  GroupPresentation g;
  g.rank = 2;
  g.gens = {Moebius(1, 1, 1, 2), Moebius(1, -1, -1, 2)};
  Word a = Word::from_indices({1}, 2);
  Word b = Word::from_indices({2}, 2);
  g.cusp_words = {a * b * a.inverse() * b.inverse()};
  g.genus = 1;
  g.sides = {
      {true, 1.0, 0, +1, b},
      {true, -1.0, 0, -1, a},
      {false, 0.5, 0.5, +1, a.inverse()},
      {false, -0.5, 0.5, +1, b.inverse()},
  };
  return g;
}

std::optional<GroupPresentation> preset_by_name(const std::string& name) {
  if (name == "gamma2") return preset_gamma2();
  if (name == "punctured_torus") return preset_punctured_torus();
  return std::nullopt;
}

}  // namespace covermix
