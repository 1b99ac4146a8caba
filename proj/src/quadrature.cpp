#include "covermix/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace covermix {
namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; the rule
// is symmetric).  Even Kronrod positions coincide with the Gauss-7 nodes.
constexpr double kKx[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKw[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGw[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double integral;  // K15 value
  double error;     // |K15 - G7|
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double k = kKw[7] * fc, g = kGw[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double f1 = f(c - h * kKx[i]);
    double f2 = f(c + h * kKx[i]);
    k += kKw[i] * (f1 + f2);
    if (i % 2 == 1) g += kGw[i / 2] * (f1 + f2);
  }
  return {k * h, std::abs((k - g) * h)};
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, double abs_tol, int max_depth) {
  require(std::isfinite(a) && std::isfinite(b), ErrKind::validation,
          "integration bounds must be finite");
  if (a == b) return 0.0;
  struct Item {
    double a, b;
    Panel p;
    int depth;
  };
  Panel whole = gk15(f, a, b);
  // first-pass scale for the relative test; refined panels only shrink it
  double scale = std::abs(whole.integral);
  std::vector<Item> stack{{a, b, whole, 0}};
  double sum = 0.0, comp = 0.0;  // Kahan-compensated accumulation
  auto add = [&](double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    double tol = std::max(abs_tol, rel_tol * std::max(scale, std::abs(sum)));
    // per-panel share of the budget, proportional to panel width
    double local = tol * std::abs(it.b - it.a) / std::abs(b - a);
    if (it.p.error <= local || it.p.error <= 1e-300) {
      add(it.p.integral);
      continue;
    }
    if (it.depth >= max_depth)
      fail(ErrKind::numeric, "adaptive quadrature failed to converge");
    double m = 0.5 * (it.a + it.b);
    stack.push_back({m, it.b, gk15(f, m, it.b), it.depth + 1});
    stack.push_back({it.a, m, gk15(f, it.a, m), it.depth + 1});
  }
  return sum;
}

double halton(unsigned long long index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= double(base);
    r += f * double(index % base);
    index /= base;
  }
  return r;
}

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= double(i);
  return r;
}

// Re[ Gamma(p) / (n - i b)^p ]  -- the closed-form radial integral
// Integral_0^inf exp(-n r) cos(b r) r^{p-1} dr for n > 0.
double radial_factor(double n, double b, int p) {
  require(n > 1e-14, ErrKind::numeric,
          "norm degenerates along some direction; integral diverges");
  std::complex<double> z(n, -b);
  std::complex<double> zp = std::pow(z, p);
  return factorial(p - 1) * (zp / std::norm(zp)).real();
}

struct NormEval {
  const std::vector<std::vector<double>>* A;
  const std::vector<double>* xi;
  int p;

  double operator()(const std::vector<double>& w) const {
    double n = 0.0;
    for (const auto& row : *A) {
      double s = 0.0;
      for (int i = 0; i < p; ++i) s += row[i] * w[i];
      n += std::abs(s);
    }
    double b = 0.0;
    if (!xi->empty())
      for (int i = 0; i < p; ++i) b += (*xi)[i] * w[i];
    return radial_factor(n, b, p);
  }
};

}  // namespace

NormIntegral norm_exp_integral(const std::vector<std::vector<double>>& A,
                               int p, const std::vector<double>& xi,
                               double rel_tol) {
  require(p >= 0, ErrKind::validation, "dimension must be nonnegative");
  require(xi.empty() || int(xi.size()) == p, ErrKind::validation,
          "frequency vector dimension mismatch");
  for (const auto& row : A)
    require(int(row.size()) == p, ErrKind::validation,
            "norm matrix column count mismatch");
  if (p == 0) return {1.0, 0.0, true};  // empty product over a point

  NormEval g{&A, &xi, p};

  if (p == 1) {
    double v = g({1.0}) + g({-1.0});
    return {v, 1e-15, true};
  }

  if (p == 2) {
    // split [0, 2pi) at the kink directions of n (rows vanish there)
    std::vector<double> cuts{0.0, 2.0 * std::numbers::pi};
    for (const auto& row : A) {
      if (row[0] == 0.0 && row[1] == 0.0) continue;
      double t = std::atan2(row[0], -row[1]);  // direction with row.w = 0
      for (double s : {t, t + std::numbers::pi}) {
        double u = std::fmod(s, 2.0 * std::numbers::pi);
        if (u < 0) u += 2.0 * std::numbers::pi;
        cuts.push_back(u);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double v = 0.0, comp = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] - cuts[i] < 1e-14) continue;
      double piece = integrate_1d(
          [&](double th) { return g({std::cos(th), std::sin(th)}); }, cuts[i],
          cuts[i + 1], rel_tol, 0.0);
      double y = piece - comp;
      double t = v + y;
      comp = (t - v) - y;
      v = t;
    }
    return {v, rel_tol, true};
  }

  if (p == 3) {
    // spherical coordinates; inner integral tighter so the outer tolerance
    // dominates the error
    auto outer = [&](double th) {
      double st = std::sin(th), ct = std::cos(th);
      return st * integrate_1d(
                      [&](double ph) {
                        return g({st * std::cos(ph), st * std::sin(ph), ct});
                      },
                      0.0, 2.0 * std::numbers::pi, rel_tol * 0.125, 0.0);
    };
    double v = integrate_1d(outer, 0.0, std::numbers::pi, rel_tol, 0.0);
    return {v, rel_tol, true};
  }

  // p > 3: Halton quasi-random directions (Box-Muller onto the sphere)
  constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                  23, 29, 31, 37, 41, 43, 47, 53};
  int pairs = (p + 1) / 2;
  require(2 * pairs <= int(sizeof(kPrimes) / sizeof(kPrimes[0])),
          ErrKind::validation, "dimension too large for the sampler");
  const unsigned long long N = 1ull << 17;
  double mean = 0.0, m2 = 0.0, comp = 0.0;
  std::vector<double> w(p);
  for (unsigned long long k = 1; k <= N; ++k) {
    int filled = 0;
    for (int q = 0; q < pairs && filled < p; ++q) {
      double u1 = halton(k, kPrimes[2 * q]);
      double u2 = halton(k, kPrimes[2 * q + 1]);
      u1 = std::max(u1, 1e-17);
      double rad = std::sqrt(-2.0 * std::log(u1));
      double z1 = rad * std::cos(2.0 * std::numbers::pi * u2);
      double z2 = rad * std::sin(2.0 * std::numbers::pi * u2);
      w[filled++] = z1;
      if (filled < p) w[filled++] = z2;
    }
    double nrm = 0.0;
    for (double z : w) nrm += z * z;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) continue;
    for (double& z : w) z /= nrm;
    double val = g(w);
    // Welford update with compensated mean shift
    double delta = val - mean;
    mean += delta / double(k);
    m2 += delta * (val - mean);
    (void)comp;
  }
  double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * p) /
                   std::tgamma(0.5 * p);
  double value = mean * surface;
  double se = std::sqrt(std::max(m2, 0.0) / double(N - 1) / double(N));
  double rel = std::abs(mean) > 0 ? se / std::abs(mean) : 1.0;
  return {value, rel, false};
}

}  // namespace covermix
