#pragma once
#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>

#include "covermix/errors.hpp"

namespace covermix {

// Thrown by the checked 64-bit fast path; enumeration kernels catch it and
// restart on arbitrary-precision entries.  Not part of the public error set.
struct OverflowSignal {};

struct CheckedI64 {
  long long v = 0;
  CheckedI64() = default;
  CheckedI64(long long x) : v(x) {}
  friend CheckedI64 operator*(CheckedI64 x, CheckedI64 y) {
    long long r;
    if (__builtin_mul_overflow(x.v, y.v, &r)) throw OverflowSignal{};
    return {r};
  }
  friend CheckedI64 operator+(CheckedI64 x, CheckedI64 y) {
    long long r;
    if (__builtin_add_overflow(x.v, y.v, &r)) throw OverflowSignal{};
    return {r};
  }
  friend CheckedI64 operator-(CheckedI64 x, CheckedI64 y) {
    long long r;
    if (__builtin_sub_overflow(x.v, y.v, &r)) throw OverflowSignal{};
    return {r};
  }
  CheckedI64 operator-() const {
    if (v == INT64_MIN) throw OverflowSignal{};
    return {-v};
  }
  friend bool operator==(CheckedI64 x, CheckedI64 y) { return x.v == y.v; }
  friend auto operator<=>(CheckedI64 x, CheckedI64 y) { return x.v <=> y.v; }
};

inline double to_double(const CheckedI64& x) { return double(x.v); }
inline double to_double(const mpz_class& x) { return x.get_d(); }
inline long long to_ll(const CheckedI64& x) { return x.v; }

// gmpxx here has no long long constructor; long is 64-bit on this target
inline mpz_class mpz_from_ll(long long x) {
  static_assert(sizeof(long) == sizeof(long long));
  return mpz_class(static_cast<long>(x));
}

template <class T>
struct Mat2 {
  T a{}, b{}, c{}, d{};

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  // valid for det == 1
  Mat2 inverse() const { return {d, -b, -c, a}; }

  T trace() const { return a + d; }
  T det() const { return a * d - b * c; }
  T sum_sq() const { return a * a + b * b + c * c + d * d; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

using MatZ = Mat2<mpz_class>;
using Mat64 = Mat2<CheckedI64>;
using MatD = Mat2<double>;

// Exact integer Moebius transformation in PSL2: det == 1, sign-canonical
// (a > 0, or a == 0 and b > 0).
struct Moebius {
  MatZ m = MatZ::identity();

  Moebius() = default;
  explicit Moebius(MatZ x) : m(std::move(x)) { canonicalize(); }
  Moebius(long long a, long long b, long long c, long long d)
      : m{mpz_from_ll(a), mpz_from_ll(b), mpz_from_ll(c), mpz_from_ll(d)} {
    canonicalize();
  }

  void canonicalize() {
    int sa = sgn(m.a);
    if (sa < 0 || (sa == 0 && sgn(m.b) < 0)) {
      m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d;
    }
  }

  static int sgn(const mpz_class& x) { return mpz_sgn(x.get_mpz_t()); }

  bool unit_det() const { return m.det() == 1; }
  bool is_identity() const { return m == MatZ::identity(); }

  friend Moebius operator*(const Moebius& x, const Moebius& y) {
    return Moebius(x.m * y.m);
  }
  Moebius inverse() const { return Moebius(m.inverse()); }

  friend bool operator==(const Moebius&, const Moebius&) = default;

  std::string str() const {
    return "[" + m.a.get_str() + "," + m.b.get_str() + ";" + m.c.get_str() +
           "," + m.d.get_str() + "]";
  }
};

// Validating constructor for user-supplied matrices.
inline Moebius moebius_checked(long long a, long long b, long long c, long long d) {
  Moebius g(a, b, c, d);
  require(g.unit_det(), ErrKind::validation,
          "matrix determinant must be 1: " + g.str());
  return g;
}

inline MatD to_matd(const Moebius& g) {
  return {to_double(g.m.a), to_double(g.m.b), to_double(g.m.c), to_double(g.m.d)};
}

template <class T>
Mat2<T> mat_cast(const MatZ& z) {
  if constexpr (std::is_same_v<T, mpz_class>) return z;
  else {
    auto fit = [](const mpz_class& x) {
      if (!x.fits_slong_p()) throw OverflowSignal{};
      return T(x.get_si());
    };
    return {fit(z.a), fit(z.b), fit(z.c), fit(z.d)};
  }
}

}  // namespace covermix
