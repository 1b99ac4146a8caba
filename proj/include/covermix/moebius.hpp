#pragma once
#include <cmath>
#include <complex>

#include "covermix/exact.hpp"

namespace covermix {

// Upper half-plane point, curvature -1 throughout.
struct PointH2 {
  double x = 0, y = 1;
};

inline PointH2 point_checked(double x, double y) {
  require(std::isfinite(x) && std::isfinite(y) && y > 0, ErrKind::validation,
          "point must lie in the open upper half-plane");
  return {x, y};
}

enum class IsomClass { identity, elliptic, parabolic, hyperbolic };

const char* isom_class_name(IsomClass c);

double dist(const PointH2& z, const PointH2& w);

PointH2 apply(const MatD& m, const PointH2& z);
PointH2 apply(const Moebius& g, const PointH2& z);

// d(i, g.i); exact integer entries give cosh d = (a^2+b^2+c^2+d^2)/2.
double dist_from_origin(const Moebius& g);

IsomClass classify(const Moebius& g);           // exact
IsomClass classify(const MatD& m, double eps = 1e-9);  // det-1-normalized real

double translation_length(const Moebius& g);    // throws not_hyperbolic
double translation_length_real(const MatD& m, double eps = 1e-9);

// Real frame for unit-tangent geometry; kept det-normalized.
struct Frame {
  MatD m = MatD::identity();
  Frame() = default;
  explicit Frame(MatD x) : m(x) { renormalize(); }
  void renormalize();
  friend Frame operator*(const Frame& a, const Frame& b) { return Frame(a.m * b.m); }
  Frame inverse() const { return Frame(m.inverse()); }
};

inline Frame to_frame(const Moebius& g) { return Frame(to_matd(g)); }

// Unit tangent vector, stored as the frame g with v = g.(i, up).
struct UnitTangent {
  Frame g;
  PointH2 base_point() const;
  double angle() const;  // direction in (-pi, pi], 0 = +x, pi/2 = up
  static UnitTangent from_point_angle(const PointH2& z, double theta);
};

UnitTangent geodesic_flow(const UnitTangent& v, double t);

}  // namespace covermix
