#include "covermix/moebius.hpp"

namespace covermix {

const char* isom_class_name(IsomClass c) {
  switch (c) {
    case IsomClass::identity: return "identity";
    case IsomClass::elliptic: return "elliptic";
    case IsomClass::parabolic: return "parabolic";
    case IsomClass::hyperbolic: return "hyperbolic";
  }
  return "?";
}

double dist(const PointH2& z, const PointH2& w) {
  double dx = z.x - w.x, dy = z.y - w.y;
  double q = 1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y);
  return std::acosh(std::max(1.0, q));
}

PointH2 apply(const MatD& m, const PointH2& z) {
  std::complex<double> zz(z.x, z.y);
  std::complex<double> w = (m.a * zz + m.b) / (m.c * zz + m.d);
  return {w.real(), w.imag()};
}

PointH2 apply(const Moebius& g, const PointH2& z) { return apply(to_matd(g), z); }

double dist_from_origin(const Moebius& g) {
  mpz_class s = g.m.sum_sq();
  double q = s.get_d() / 2.0;
  return std::acosh(std::max(1.0, q));
}

IsomClass classify(const Moebius& g) {
  if (g.is_identity()) return IsomClass::identity;
  mpz_class t = g.m.trace();
  mpz_class at = abs(t);
  if (at < 2) return IsomClass::elliptic;
  if (at == 2) return IsomClass::parabolic;
  return IsomClass::hyperbolic;
}

IsomClass classify(const MatD& m, double eps) {
  double det = m.det();
  double t = std::abs(m.trace()) / std::sqrt(std::abs(det));
  bool ident = std::abs(m.b) < eps && std::abs(m.c) < eps &&
               std::abs(m.a - m.d) < eps * std::abs(m.a);
  if (ident) return IsomClass::identity;
  if (t < 2 - eps) return IsomClass::elliptic;
  if (t > 2 + eps) return IsomClass::hyperbolic;
  return IsomClass::parabolic;
}

double translation_length(const Moebius& g) {
  require(classify(g) == IsomClass::hyperbolic, ErrKind::not_hyperbolic,
          "translation length requires a hyperbolic element, got " +
              std::string(isom_class_name(classify(g))));
  mpz_class t = abs(g.m.trace());
  return 2.0 * std::acosh(t.get_d() / 2.0);
}

double translation_length_real(const MatD& m, double eps) {
  require(classify(m, eps) == IsomClass::hyperbolic, ErrKind::not_hyperbolic,
          "translation length requires a hyperbolic element");
  double t = std::abs(m.trace()) / std::sqrt(std::abs(m.det()));
  return 2.0 * std::acosh(t / 2.0);
}

void Frame::renormalize() {
  double det = m.det();
  require(std::isfinite(det) && std::abs(det) > 1e-300, ErrKind::numeric,
          "degenerate frame");
  double s = 1.0 / std::sqrt(std::abs(det));
  if (det < 0) fail(ErrKind::numeric, "orientation-reversing frame");
  m = {m.a * s, m.b * s, m.c * s, m.d * s};
}

PointH2 UnitTangent::base_point() const { return apply(g.m, PointH2{0, 1}); }

double UnitTangent::angle() const {
  // derivative of z -> (az+b)/(cz+d) at i is 1/(ci+d)^2; upward vector i maps
  // to i/(ci+d)^2, whose argument is the direction angle.
  std::complex<double> den(g.m.d, g.m.c);  // ci + d
  std::complex<double> dir = std::complex<double>(0, 1) / (den * den);
  return std::arg(dir);
}

UnitTangent UnitTangent::from_point_angle(const PointH2& z, double theta) {
  require(z.y > 0, ErrKind::validation, "base point must have y > 0");
  double phi = 0.5 * (M_PI_2 - theta);
  double cs = std::cos(phi), sn = std::sin(phi);
  double ry = std::sqrt(z.y);
  MatD n{1, z.x, 0, 1};
  MatD a{ry, 0, 0, 1.0 / ry};
  MatD k{cs, -sn, sn, cs};
  return UnitTangent{Frame(n * a * k)};
}

UnitTangent geodesic_flow(const UnitTangent& v, double t) {
  double e = std::exp(t / 2.0);
  MatD at{e, 0, 0, 1.0 / e};
  return UnitTangent{Frame(v.g.m * at)};
}

}  // namespace covermix
