// Upper half-plane geometry and free-group word arithmetic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "covermix/errors.hpp"
#include "covermix/moebius.hpp"
#include "covermix/word.hpp"

using namespace covermix;

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename F>
bool throws_kind(F&& f, ErrKind k) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind == k;
  } catch (...) {
    return false;
  }
  return false;
}

// independent complex-arithmetic Moebius action used as the oracle
PointH2 apply_complex(long long a, long long b, long long c, long long d,
                      const PointH2& z) {
  std::complex<double> zz(z.x, z.y);
  std::complex<double> w =
      (double(a) * zz + double(b)) / (double(c) * zz + double(d));
  return {w.real(), w.imag()};
}

}  // namespace

TEST_CASE("moebius action on the half plane") {
  PointH2 i{0.0, 1.0};
  Moebius id;
  PointH2 r = apply(id, i);
  CHECK(r.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.y == doctest::Approx(1.0).epsilon(1e-15));

  Moebius A(1, 2, 0, 1);
  r = apply(A, i);
  CHECK(r.x == doctest::Approx(2.0));
  CHECK(r.y == doctest::Approx(1.0));

  Moebius B(1, 0, 2, 1);
  r = apply(B, i);  // i/(2i+1) = (2 + i)/5
  PointH2 o = apply_complex(1, 0, 2, 1, i);
  CHECK(r.x == doctest::Approx(o.x).epsilon(1e-14));
  CHECK(r.y == doctest::Approx(o.y).epsilon(1e-14));
  CHECK(r.x == doctest::Approx(0.4));
  CHECK(r.y == doctest::Approx(0.2));

  // random words against the complex oracle
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Moebius m;
    for (int k = 0; k < 6; ++k) {
      m = (rng() % 2) ? m * A : m * B;
      if (rng() % 3 == 0) m = m * A.inverse();
    }
    PointH2 z{std::uniform_real_distribution<double>(-3, 3)(rng),
              std::uniform_real_distribution<double>(0.1, 5)(rng)};
    PointH2 got = apply(m, z);
    PointH2 want = apply_complex(m.m.a.get_si(), m.m.b.get_si(),
                                 m.m.c.get_si(), m.m.d.get_si(), z);
    CHECK(got.x == doctest::Approx(want.x).epsilon(1e-10));
    CHECK(got.y == doctest::Approx(want.y).epsilon(1e-10));
    CHECK(got.y > 0);
  }

  CHECK(throws_kind([] { point_checked(0.0, 0.0); }, ErrKind::validation));
  CHECK(throws_kind([] { point_checked(0.0, -1.0); }, ErrKind::validation));
}

TEST_CASE("hyperbolic distance") {
  PointH2 i{0.0, 1.0};
  CHECK(dist(i, i) == 0.0);
  CHECK(dist(i, {2.0, 1.0}) == doctest::Approx(std::acosh(3.0)).epsilon(1e-14));
  // vertical geodesic arc length: integral of dy/y from 1 to e
  CHECK(dist(i, {0.0, std::exp(1.0)}) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-5, 5), uy(0.05, 8);
  Moebius A(1, 2, 0, 1), B(1, 0, 2, 1);
  for (int trial = 0; trial < 200; ++trial) {
    PointH2 z{ux(rng), uy(rng)}, w{ux(rng), uy(rng)};
    CHECK(dist(z, w) == doctest::Approx(dist(w, z)).epsilon(1e-13));
    CHECK(dist(z, w) >= 0.0);
    // isometry under a random integer-backed element
    Moebius m;
    for (int k = 0; k < 5; ++k) m = (rng() % 2) ? m * A : m * B.inverse();
    CHECK(std::fabs(dist(apply(m, z), apply(m, w)) - dist(z, w)) < 1e-9);
  }
}

TEST_CASE("distance from origin via the entry identity") {
  CHECK(dist_from_origin(Moebius()) == 0.0);
  CHECK(dist_from_origin(Moebius(1, 2, 0, 1)) ==
        doctest::Approx(std::acosh(3.0)).epsilon(1e-14));
  CHECK(dist_from_origin(Moebius(1, 0, 2, 1)) ==
        doctest::Approx(std::acosh(3.0)).epsilon(1e-14));

  std::mt19937_64 rng(23);
  Moebius A(1, 2, 0, 1), B(1, 0, 2, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Moebius m;
    for (int k = 0; k < 7; ++k) m = (rng() % 2) ? m * A : m * B;
    PointH2 img = apply(m, {0.0, 1.0});
    CHECK(std::fabs(dist_from_origin(m) - dist({0.0, 1.0}, img)) < 1e-12);
  }
}

TEST_CASE("isometry classification") {
  CHECK(classify(Moebius()) == IsomClass::identity);
  CHECK(classify(Moebius(1, 2, 0, 1)) == IsomClass::parabolic);
  CHECK(classify(Moebius(5, 2, 2, 1)) == IsomClass::hyperbolic);
  CHECK(classify(Moebius(0, -1, 1, 0)) == IsomClass::elliptic);
  // the product example: tr(AB) = 6
  Moebius AB = Moebius(1, 2, 0, 1) * Moebius(1, 0, 2, 1);
  CHECK(AB == Moebius(5, 2, 2, 1));
  CHECK(classify(AB) == IsomClass::hyperbolic);

  // conjugation invariance, exact
  std::mt19937_64 rng(5);
  Moebius A(1, 2, 0, 1), B(1, 0, 2, 1);
  std::vector<Moebius> reps{Moebius(), A, AB, Moebius(0, -1, 1, 0)};
  for (int trial = 0; trial < 50; ++trial) {
    Moebius g;
    for (int k = 0; k < 5; ++k) g = (rng() % 2) ? g * A : g * B.inverse();
    for (const Moebius& m : reps)
      CHECK(classify(g * m * g.inverse()) == classify(m));
  }
}

TEST_CASE("translation length") {
  CHECK(translation_length(Moebius(5, 2, 2, 1)) ==
        doctest::Approx(2.0 * std::acosh(3.0)).epsilon(1e-14));
  CHECK(throws_kind([] { translation_length(Moebius(1, 2, 0, 1)); },
                    ErrKind::not_hyperbolic));
  CHECK(throws_kind([] { translation_length(Moebius()); },
                    ErrKind::not_hyperbolic));
  // real-backed diagonal flow element: length 2 ln 2
  MatD d{2.0, 0.0, 0.0, 0.5};
  CHECK(translation_length_real(d) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  // inverse has the same length (trace is shared)
  Moebius m(5, 2, 2, 1);
  CHECK(translation_length(m) == translation_length(m.inverse()));
}

TEST_CASE("moebius algebra invariants") {
  std::mt19937_64 rng(31);
  Moebius A(1, 2, 0, 1), B(1, 0, 2, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Moebius m;
    for (int k = 0; k < 8; ++k) m = (rng() % 2) ? m * A : m * B.inverse();
    CHECK(m.m.det() == 1);
    CHECK(m * m.inverse() == Moebius());
    // sign canonicalization is idempotent and fixes the representative
    Moebius flip(MatZ{-m.m.a, -m.m.b, -m.m.c, -m.m.d});
    CHECK(flip == m);
    CHECK((m.m.a > 0 || (m.m.a == 0 && m.m.b > 0)));
  }
  CHECK(throws_kind([] { moebius_checked(1, 1, 1, 1); }, ErrKind::validation));
}

TEST_CASE("geodesic flow") {
  UnitTangent up = UnitTangent::from_point_angle({0.0, 1.0}, kPi / 2);
  for (double t : {0.3, 1.0, 2.5}) {
    UnitTangent v = geodesic_flow(up, t);
    PointH2 p = v.base_point();
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(std::exp(t)).epsilon(1e-12));
    CHECK(v.angle() == doctest::Approx(kPi / 2).epsilon(1e-12));
  }
  // t = 0 is the identity
  UnitTangent w = UnitTangent::from_point_angle({0.7, 2.0}, 0.3);
  UnitTangent w0 = geodesic_flow(w, 0.0);
  CHECK(w0.base_point().x == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(w0.base_point().y == doctest::Approx(2.0).epsilon(1e-13));

  // group law: flow(flow(v,s),t) = flow(v,s+t)
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> us(-5, 5), uxv(-3, 3), uyv(0.2, 4),
      uth(-kPi, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    UnitTangent v = UnitTangent::from_point_angle({uxv(rng), uyv(rng)},
                                                  uth(rng));
    double s = us(rng), t = us(rng);
    UnitTangent lhs = geodesic_flow(geodesic_flow(v, s), t);
    UnitTangent rhs = geodesic_flow(v, s + t);
    CHECK(dist(lhs.base_point(), rhs.base_point()) < 1e-9);
    double da = std::remainder(lhs.angle() - rhs.angle(), 2 * kPi);
    CHECK(std::fabs(da) < 1e-9);
  }

  // base point moves distance |t| along the geodesic
  for (int trial = 0; trial < 50; ++trial) {
    UnitTangent v = UnitTangent::from_point_angle({uxv(rng), uyv(rng)},
                                                  uth(rng));
    double t = us(rng);
    CHECK(dist(v.base_point(), geodesic_flow(v, t).base_point()) ==
          doctest::Approx(std::fabs(t)).epsilon(1e-9));
  }
}

TEST_CASE("unit tangent round trip") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> uxv(-4, 4), uyv(0.1, 6),
      uth(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    PointH2 z{uxv(rng), uyv(rng)};
    double th = uth(rng);
    UnitTangent v = UnitTangent::from_point_angle(z, th);
    CHECK(v.base_point().x == doctest::Approx(z.x).epsilon(1e-9));
    CHECK(v.base_point().y == doctest::Approx(z.y).epsilon(1e-9));
    double da = std::remainder(v.angle() - th, 2 * kPi);
    CHECK(std::fabs(da) < 1e-9);
  }
}

TEST_CASE("word reduction and arithmetic") {
  Word a = Word::from_indices({1}, 2);
  Word b = Word::from_indices({2}, 2);
  CHECK((a * a.inverse()).empty());
  CHECK(Word::from_indices({1, -1}, 2).empty());
  CHECK(Word::from_indices({1, 2, -2, -1}, 2).empty());

  Word ab = a * b;
  CHECK(ab.size() == 2);
  CHECK(ab.str() == "a b");
  CHECK(ab.inverse().str() == "b^-1 a^-1");
  CHECK((ab.pow(3).size()) == 6);
  CHECK(ab.pow(0).empty());
  CHECK(ab.pow(-2) == (ab.inverse() * ab.inverse()));

  // abelianize: homomorphism property on random pairs
  std::mt19937_64 rng(53);
  auto random_word = [&](int len) {
    std::vector<int> idx;
    for (int k = 0; k < len; ++k) {
      int g = int(rng() % 2) + 1;
      idx.push_back((rng() % 2) ? g : -g);
    }
    return Word::from_indices(idx, 2);
  };
  for (int trial = 0; trial < 100; ++trial) {
    Word u = random_word(int(rng() % 10)), v = random_word(int(rng() % 10));
    auto au = u.abelianize(2), av = v.abelianize(2),
         auv = (u * v).abelianize(2);
    CHECK(auv[0] == au[0] + av[0]);
    CHECK(auv[1] == au[1] + av[1]);
  }
  CHECK(Word::from_indices({1, 2, -1, -2}, 2).abelianize(2) ==
        std::vector<long long>{0, 0});
  CHECK(Word::from_indices({1, 1, 2}, 2).abelianize(2) ==
        std::vector<long long>{2, 1});
}

TEST_CASE("necklace canonicalization and primitivity") {
  Word ab = Word::from_indices({1, 2}, 2);
  Word ba = Word::from_indices({2, 1}, 2);
  CHECK(ab.least_rotation() == ba.least_rotation());
  // conjugation shells strip to the cyclic core
  Word w = Word::from_indices({1, 1, 2, -1}, 2);  // a (a b) a^-1
  CHECK(w.cyclically_reduced().least_rotation() == ab.least_rotation());
  // rotation invariance on random cyclic words
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> idx;
    int len = 2 + int(rng() % 6);
    for (int k = 0; k < len; ++k) {
      int g = int(rng() % 2) + 1;
      idx.push_back((rng() % 2) ? g : -g);
    }
    Word u = Word::from_indices(idx, 2).cyclically_reduced();
    if (u.empty()) continue;
    auto ls = u.letters();
    std::rotate(ls.begin(), ls.begin() + 1, ls.end());
    Word rot = Word::from_letters(ls);
    if (rot.size() == u.size())  // rotation stayed reduced
      CHECK(rot.least_rotation() == u.least_rotation());
  }
  CHECK(ab.primitive());
  CHECK(!(ab * ab).primitive());
  CHECK(!(ab * ab * ab).primitive());
  CHECK(Word::from_indices({1, 2, 1}, 2).primitive());
  CHECK(is_primitive(Word::from_indices({1, 2}, 2).letters()));
  CHECK(!is_primitive(Word::from_indices({1, 1}, 2).letters()));
}
