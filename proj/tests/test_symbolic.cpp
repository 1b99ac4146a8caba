// Markov shifts, transfer-operator eigendata, twisted spectrum, step
// windows, window sums, correlation sums, and the local-limit series,
// checked against closed forms and the exact-path / big-integer oracles.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "covermix/errors.hpp"
#include "covermix/qsum.hpp"
#include "covermix/shift.hpp"
#include "oracles.hpp"

using namespace covermix;

namespace {

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

std::vector<std::vector<double>> constant_table(int n, double v) {
  return std::vector<std::vector<double>>(std::size_t(n),
                                          std::vector<double>(std::size_t(n), v));
}

std::vector<std::vector<int>> full(int n) {
  return std::vector<std::vector<int>>(std::size_t(n),
                                       std::vector<int>(std::size_t(n), 1));
}

const double log2v = std::log(2.0);
const double log3v = std::log(3.0);

}  // namespace

TEST_CASE("shift construction and the mixing flag") {
  MarkovShift full2 = make_shift({{1, 1}, {1, 1}});
  MarkovShift golden = make_shift({{1, 1}, {1, 0}});
  MarkovShift full3 = make_shift({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}},
                                 {"down", "stay", "up"});
  MarkovShift per2 = make_shift({{0, 1}, {1, 0}});
  CHECK(full2.mixing);
  CHECK(golden.mixing);
  CHECK(full3.mixing);
  CHECK(full3.labels[2] == "up");
  CHECK(!per2.mixing);
  CHECK(throws_kind([] { make_shift({{1, 1}, {0, 0}}); }, ErrKind::validation));
  CHECK(throws_kind([] { make_shift({{1, 1}, {1}}); }, ErrKind::validation));
  CHECK(throws_kind([] { make_shift({{1, 2}, {1, 1}}); }, ErrKind::validation));
}

TEST_CASE("transfer operator: hand values and the naive oracle") {
  MarkovShift full2 = make_shift({{1, 1}, {1, 1}});
  MarkovShift golden = make_shift({{1, 1}, {1, 0}});
  std::vector<double> one{1.0, 1.0};

  auto r1 = transfer_apply(full2, constant_table(2, log2v), one);
  CHECK(std::fabs(r1[0] - 1.0) < 1e-15);
  CHECK(std::fabs(r1[1] - 1.0) < 1e-15);
  auto r2 = transfer_apply(full2, constant_table(2, 0.0), one);
  CHECK(std::fabs(r2[0] - 2.0) < 1e-15);
  CHECK(std::fabs(r2[1] - 2.0) < 1e-15);
  // golden mean: state 1 has only preimage 0
  auto r3 = transfer_apply(golden, constant_table(2, 0.0), {5.0, 7.0});
  CHECK(std::fabs(r3[0] - 12.0) < 1e-15);
  CHECK(std::fabs(r3[1] - 5.0) < 1e-15);

  // random tables against the independent summation oracle
  MarkovShift s3 = make_shift({{1, 1, 0}, {1, 1, 1}, {0, 1, 1}});
  MarkovShift f3 = make_shift(full(3));
  std::mt19937_64 rng(424242ull);
  std::uniform_real_distribution<double> rr(0.0, 2.0), rf(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const MarkovShift& s = (trial % 2) ? s3 : f3;
    std::vector<std::vector<double>> r(3, std::vector<double>(3, 0.0));
    std::vector<double> F(3);
    for (auto& row : r)
      for (auto& e : row) e = rr(rng);
    for (auto& v : F) v = rf(rng);
    auto got = transfer_apply(s, r, F);
    auto want = oracles::transfer_oracle(s.transition, r, F);
    for (int i = 0; i < 3; ++i)
      CHECK(std::fabs(got[std::size_t(i)] - want[std::size_t(i)]) < 1e-14);
  }
}

TEST_CASE("leading eigendata: closed forms") {
  MarkovShift full2 = make_shift({{1, 1}, {1, 1}});
  MarkovShift golden = make_shift({{1, 1}, {1, 0}});
  MarkovShift per2 = make_shift({{0, 1}, {1, 0}});

  GibbsData gd = leading_triple(full2, make_potential(full2, constant_table(2, log2v)));
  CHECK(std::fabs(gd.lambda - 1.0) < 1e-12);
  CHECK(std::fabs(gd.psi[0] - 1.0) < 1e-12);
  CHECK(std::fabs(gd.psi[1] - 1.0) < 1e-12);
  CHECK(std::fabs(gd.rho[0] - 0.5) < 1e-12);
  CHECK(std::fabs(gd.rho[1] - 0.5) < 1e-12);
  CHECK(std::fabs(gd.pressure) < 1e-12);

  GibbsData g0 = leading_triple(full2, make_potential(full2, constant_table(2, 0.0)));
  CHECK(std::fabs(g0.lambda - 2.0) < 1e-12);
  CHECK(std::fabs(g0.pressure - log2v) < 1e-12);
  CHECK(std::fabs(g0.r_hat[0][0] - log2v) < 1e-12);

  // golden mean: the eigenvalue is the positive root of x^2 - x - 1
  GibbsData gg = leading_triple(golden, make_potential(golden, constant_table(2, 0.0)));
  CHECK(std::fabs(gg.lambda - (1 + std::sqrt(5.0)) / 2) < 1e-12);
  CHECK(std::fabs(gg.lambda * gg.lambda - gg.lambda - 1.0) < 1e-12);

  CHECK(throws_kind(
      [&] { leading_triple(per2, make_potential(per2, constant_table(2, 0.0))); },
      ErrKind::not_mixing));
}

TEST_CASE("leading eigendata: Gibbs residuals on a lopsided system") {
  MarkovShift s3 = make_shift({{1, 1, 0}, {1, 1, 1}, {0, 1, 1}});
  std::vector<std::vector<double>> r{{0.3, 1.1, 0}, {0.2, 0.9, 1.7}, {0, 0.4, 0.6}};
  GibbsData gs = leading_triple(s3, make_potential(s3, r));

  // L psi = psi for the normalized table, componentwise
  auto lp = transfer_apply(s3, gs.r_hat, gs.psi);
  for (int i = 0; i < 3; ++i)
    CHECK(std::fabs(lp[std::size_t(i)] - gs.psi[std::size_t(i)]) < 1e-12);
  CHECK(std::fabs(gs.rho[0] + gs.rho[1] + gs.rho[2] - 1.0) < 1e-14);
  CHECK(std::fabs(gs.nu[0] + gs.nu[1] + gs.nu[2] - 1.0) < 1e-14);
  for (double v : gs.psi) CHECK(v > 0);

  // rho(L F) = rho(F): the eigenmeasure transports the operator to the
  // identity on averages, which is the finite-state duality pairing
  std::vector<double> F{0.37, -1.2, 2.41};
  auto LF = transfer_apply(s3, gs.r_hat, F);
  double a = 0, b = 0;
  for (int i = 0; i < 3; ++i) {
    a += gs.rho[std::size_t(i)] * LF[std::size_t(i)];
    b += gs.rho[std::size_t(i)] * F[std::size_t(i)];
  }
  CHECK(std::fabs(a - b) < 1e-13);

  // nu through 2-cylinder weights
  for (int bb = 0; bb < 3; ++bb) {
    double m = 0;
    for (int aa = 0; aa < 3; ++aa)
      if (s3.edge(aa, bb))
        m += gs.psi[std::size_t(aa)] *
             std::exp(-gs.r_hat[std::size_t(aa)][std::size_t(bb)]) *
             gs.rho[std::size_t(bb)];
    CHECK(std::fabs(m - gs.nu[std::size_t(bb)]) < 1e-13);
  }
}

TEST_CASE("path-positivity certificates") {
  MarkovShift full2 = make_shift({{1, 1}, {1, 1}});
  MarkovShift full3 = make_shift(full(3));

  Potential p = make_potential(full3, constant_table(3, log3v));
  CHECK(p.K == 0);
  CHECK(find_certificate(full3, p));
  CHECK(p.K == 1);
  CHECK(std::fabs(p.C - log3v) < 1e-15);

  // mixed signs: positive only after two steps
  std::vector<std::vector<double>> r{{2.0, -0.5}, {2.0, 2.0}};
  Potential q{r, 0, 0};
  CHECK(find_certificate(full2, q));
  CHECK(q.K == 2);
  CHECK(std::fabs(q.C - 1.5) < 1e-15);

  // zero-weight self-loop: no power has positive minimum
  std::vector<std::vector<double>> z{{0.0, 5.0}, {5.0, 5.0}};
  Potential zp{z, 0, 0};
  CHECK(!find_certificate(full2, zp));
  CHECK(throws_kind([&] { make_potential(full2, z, 1.0, 3); }, ErrKind::validation));
  CHECK(throws_kind([&] { make_potential(full2, z, -1.0, 3); }, ErrKind::validation));
}

TEST_CASE("twisted spectrum: circulant closed form, gradient, parity") {
  MarkovShift full3 = make_shift(full(3));
  Displacement f = make_displacement(full3, {{-1}, {0}, {1}});
  CHECK(f.d == 1);
  CHECK(f.f_max == 1);
  GibbsData gd = leading_triple(full3, make_potential(full3, constant_table(3, log3v)));
  auto lam = [&](double th, double eta) {
    return twisted_eigenvalue(full3, gd.r_hat, f, {th}, eta);
  };
  CHECK(std::abs(lam(0, 0) - 1.0) < 1e-12);
  // the twisted matrix is rank one up to phases; its eigenvalue is the
  // arithmetic mean of the three phases
  for (double th : {0.3, 1.1, 2.2, 3.14159265358979}) {
    std::complex<double> l = lam(th, 0);
    CHECK(std::abs(l - std::complex<double>((1 + 2 * std::cos(th)) / 3.0, 0)) < 1e-12);
    CHECK(std::abs(l) < 1.0);
  }
  CHECK(std::abs(lam(1.5707963267948966, 0.3)) < 1.0);

  // gradient at 0 equals i * nu(f); the symmetric walk has nu(f) = 0
  {
    double h = 1e-5;
    std::complex<double> d = (lam(h, 0) - lam(-h, 0)) / (2 * h);
    CHECK(std::abs(d) < 1e-6);
  }
  // biased walk: nu(f) != 0
  MarkovShift f2 = make_shift({{1, 1}, {1, 1}});
  Displacement fb = make_displacement(f2, {{1}, {0}});
  std::vector<std::vector<double>> rb{{0.2, 0.7}, {0.5, 0.1}};
  GibbsData gb = leading_triple(f2, make_potential(f2, rb));
  double nuf = gb.nu[0];
  double h = 1e-5;
  std::complex<double> d = (twisted_eigenvalue(f2, gb.r_hat, fb, {h}, 0) -
                            twisted_eigenvalue(f2, gb.r_hat, fb, {-h}, 0)) /
                           (2 * h);
  CHECK(std::abs(d - std::complex<double>(0, nuf)) < 1e-6);

  // parity walk f in {-1,+1}: modulus 1 at theta = pi flags periodicity
  Displacement fpar = make_displacement(f2, {{-1}, {1}});
  GibbsData g2 = leading_triple(f2, make_potential(f2, constant_table(2, log2v)));
  std::complex<double> lpi =
      twisted_eigenvalue(f2, g2.r_hat, fpar, {3.141592653589793}, 0);
  CHECK(std::fabs(std::abs(lpi) - 1.0) < 1e-12);
}

TEST_CASE("step windows: evaluation, integrals, cross-correlation") {
  StepWindow u = indicator_window(-0.5, 0.5, true, false);
  CHECK(u(-0.5) == 1.0);
  CHECK(u(0.5) == 0.0);
  CHECK(u(0.0) == 1.0);
  CHECK(u(0.7) == 0.0);
  CHECK(std::fabs(u.integral() - 1.0) < 1e-15);

  StepWindow v = make_window({{0.0, 2.0, 1.0, true, true}, {3.0, 4.0, 2.0, true, true}});
  CHECK(std::fabs(v.integral() - 4.0) < 1e-15);
  CHECK(v.lo() == 0.0);
  CHECK(v.hi() == 4.0);

  // unit indicators on [0,1]: the cross-correlation is the unit triangle
  StepWindow a = indicator_window(0.0, 1.0);
  CHECK(std::fabs(window_cross(a, a, 0.0) - 1.0) < 1e-15);
  CHECK(std::fabs(window_cross(a, a, 0.6) - 0.4) < 1e-15);
  CHECK(window_cross(a, a, 1.5) == 0.0);
  StepWindow b = make_window({{1.0, 3.0, 2.0, true, true}});
  CHECK(std::fabs(window_cross(a, b, -1.5) - 2.0) < 1e-15);

  CHECK(throws_kind(
      [] {
        make_window({{0.0, 1.0, 1.0, true, true}, {0.5, 2.0, 1.0, true, true}});
      },
      ErrKind::validation));
  CHECK(throws_kind(
      [] {
        make_window({{0.0, std::numeric_limits<double>::infinity(), 1.0, true, true}});
      },
      ErrKind::unbounded_window));

  // touching pieces allowed iff not both inclusive at the junction
  StepWindow w2 = make_window({{0.0, 1.0, 1.0, true, false}, {1.0, 2.0, 3.0, true, true}});
  CHECK(w2(1.0) == 3.0);
  CHECK(throws_kind(
      [] {
        make_window({{0.0, 1.0, 1.0, true, true}, {1.0, 2.0, 1.0, true, true}});
      },
      ErrKind::validation));
}

TEST_CASE("window sums: hand value, oracle bit-identity, budgets") {
  MarkovShift s = make_shift(full(2));
  std::vector<std::vector<double>> rh = constant_table(2, log2v);
  Displacement f = make_displacement(s, {{0}, {1}});
  std::vector<double> one{1.0, 1.0};
  StepWindow u = indicator_window(-0.5, 0.5);

  // t = 3 log 2: only 3-edge paths land in the window; among the 8 symbol
  // triples exactly C(3,1) = 3 have digit sum 1
  double q = q_sum(s, rh, f, one, one, u, 0, {1}, 3.0 * log2v);
  CHECK(std::fabs(q - 3.0 / 8.0) < 1e-14);
  double qo = oracles::qsum_oracle(s, rh, f, one, one, u, 0, {1}, 3.0 * log2v, 8);
  CHECK(q == qo);

  // n = 0 term: xi = 0, t = 0, window containing 0
  StepWindow u2 = indicator_window(-0.25, 0.25);
  CHECK(q_sum(s, rh, f, one, one, u2, 1, {0}, 0.0) == 1.0);

  // unreachable class
  Displacement f0 = make_displacement(s, {{0}, {0}});
  CHECK(q_sum(s, rh, f0, one, one, u, 0, {5}, 3.0 * log2v) == 0.0);

  // budget
  CHECK(throws_kind(
      [&] {
        QSumOptions o;
        o.max_nodes = 3;
        q_sum(s, rh, f, one, one, u, 0, {1}, 9.0 * log2v, o);
      },
      ErrKind::budget_exceeded));

  // roof without a positive path certificate
  CHECK(throws_kind(
      [&] {
        std::vector<std::vector<double>> bad = constant_table(2, -0.1);
        q_sum(s, bad, f, one, one, u, 0, {1}, 1.0);
      },
      ErrKind::validation));
}

TEST_CASE("window sums match the exact path oracle on random systems") {
  std::mt19937_64 rng(20240816ull);
  int done = 0;
  for (int trial = 0; done < 60 && trial < 400; ++trial) {
    int n = 2 + int(rng() % 3);
    auto tab = full(n);
    for (auto& row : tab)
      for (auto& e : row)
        if (rng() % 4 == 0) e = 0;
    MarkovShift s;
    try {
      s = make_shift(tab);
    } catch (const Error&) {
      continue;
    }
    if (!s.mixing) continue;
    std::uniform_real_distribution<double> re(0.4, 1.6), rv(0.1, 1.5);
    std::vector<std::vector<double>> rh(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
    for (int a2 = 0; a2 < n; ++a2)
      for (int b2 = 0; b2 < n; ++b2) rh[std::size_t(a2)][std::size_t(b2)] = re(rng);
    std::vector<std::vector<long long>> fr(std::size_t(n), std::vector<long long>(1));
    for (int a2 = 0; a2 < n; ++a2) fr[std::size_t(a2)][0] = (long long)(rng() % 3) - 1;
    Displacement f = make_displacement(s, fr);
    std::vector<double> psi(std::size_t(n)), Phi(std::size_t(n));
    for (int a2 = 0; a2 < n; ++a2)
      psi[std::size_t(a2)] = rv(rng), Phi[std::size_t(a2)] = rv(rng);
    if (trial % 7 == 0) Phi[0] = -Phi[0];
    double t = 0.5 + 2.0 * (double(rng() % 1000) / 1000.0);
    StepWindow u = indicator_window(-0.5, 0.5, true, trial % 2 == 0);
    std::vector<long long> xi{(long long)(rng() % 5) - 2};
    int x = int(rng() % (unsigned long long)(n));
    double q;
    try {
      q = q_sum(s, rh, f, psi, Phi, u, x, xi, t);
    } catch (const Error& e) {
      if (e.kind == ErrKind::validation) continue;  // no certificate
      throw;
    }
    double qo = oracles::qsum_oracle(s, rh, f, psi, Phi, u, x, xi, t,
                                     (long long)(std::ceil((t + 0.5) / 0.4) + 2));
    CHECK(q == qo);
    ++done;
  }
  CHECK(done == 60);
}

TEST_CASE("correlation sums: hand value and far-separated windows") {
  MarkovShift s = make_shift(full(2));
  Potential pot = make_potential(s, constant_table(2, log2v));
  GibbsData gd = leading_triple(s, pot);
  CHECK(std::fabs(gd.pressure) < 1e-12);
  Displacement f0 = make_displacement(s, {{}, {}});
  ProductObservable P1{{1.0, 1.0}, {}, indicator_window(0.0, 1.0)};
  ProductObservable P2{{1.0, 1.0}, {}, indicator_window(0.0, 1.0)};
  ItPair it = i_t(s, gd.r_hat, f0, gd, 1.0, P1, P2, 0.0);
  // n = 0 gives the full window overlap 1; four 1-edge paths give the
  // shifted overlap 1 - log 2; longer paths fall outside the support
  double expect = (1.0 + (1.0 - log2v)) / log2v;
  CHECK(std::fabs(it.direct - expect) < 1e-12);
  CHECK(std::fabs(it.unfolded - expect) < 1e-12);

  ItPair far = i_t(s, gd.r_hat, f0, gd, 1.0, P1, P2, -40.0);
  CHECK(far.direct == 0.0);
  CHECK(far.unfolded == 0.0);
  CHECK(std::fabs(mean_roof(s, gd) - log2v) < 1e-12);
}

TEST_CASE("unfolding identity on random mixing systems") {
  std::mt19937_64 rng(77100100ull);
  int done = 0;
  for (int trial = 0; done < 100 && trial < 600; ++trial) {
    int n = 2 + int(rng() % 3);
    auto tab = full(n);
    for (auto& row : tab)
      for (auto& e : row)
        if (rng() % 5 == 0) e = 0;
    MarkovShift s;
    try {
      s = make_shift(tab);
    } catch (const Error&) {
      continue;
    }
    if (!s.mixing) continue;
    std::uniform_real_distribution<double> re(1.0, 2.0), rv(0.1, 1.5);
    std::vector<std::vector<double>> r(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
    for (auto& row : r)
      for (auto& e : row) e = re(rng);
    GibbsData gd;
    try {
      gd = leading_triple(s, make_potential(s, r));
    } catch (const Error&) {
      continue;
    }
    std::vector<std::vector<long long>> fr(std::size_t(n), std::vector<long long>(1));
    for (auto& row : fr) row[0] = (long long)(rng() % 3) - 1;
    Displacement f = make_displacement(s, fr);
    ProductObservable P1, P2;
    P1.u = indicator_window(0.0, 0.5 + 0.001 * double(rng() % 500));
    P2.u = indicator_window(-0.3, 0.4);
    P1.xi = {(long long)(rng() % 3) - 1};
    P2.xi = {(long long)(rng() % 3) - 1};
    P1.Phi.resize(std::size_t(n));
    P2.Phi.resize(std::size_t(n));
    for (int a2 = 0; a2 < n; ++a2)
      P1.Phi[std::size_t(a2)] = rv(rng), P2.Phi[std::size_t(a2)] = rv(rng);
    double t = 0.5 + 0.0025 * double(rng() % 1000);
    double m0 = 0.5 + 0.001 * double(rng() % 2000);
    ItPair it;
    try {
      it = i_t(s, gd.r_hat, f, gd, m0, P1, P2, t);
    } catch (const Error& e) {
      if (e.kind == ErrKind::validation) continue;
      throw;
    }
    double scale = std::max(1.0, std::fabs(it.direct));
    CHECK(std::fabs(it.direct - it.unfolded) < 1e-8 * scale);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("slow-walk window sum at t = 500") {
  MarkovShift s = make_shift(full(3));
  std::vector<std::vector<double>> rh = constant_table(3, log3v);
  Displacement f = make_displacement(s, {{-1}, {0}, {1}});
  std::vector<double> one{1.0, 1.0, 1.0};
  StepWindow u = indicator_window(-0.5, 0.5);
  double q = q_sum(s, rh, f, one, one, u, 0, {0}, 500.0);
  double scaled = std::sqrt(500.0) * q;

  // only 455-edge paths land in the window, so the sum is exactly
  // (zero-sum walks of length 455) / 3^455, independently recomputed
  // with big integers
  mpz_class T = oracles::central_trinomial(455);
  mpq_class exact(T);
  mpz_class p3;
  mpz_ui_pow_ui(p3.get_mpz_t(), 3, 455);
  exact /= p3;
  double oracle = std::sqrt(500.0) * exact.get_d();

  CHECK(std::fabs(scaled - oracle) < 1e-10);
  CHECK(std::fabs(oracle - 0.5119835401288874) < 1e-11);
  double gauss = 1.0 / std::sqrt(2.0 * M_PI * (2.0 / 3.0));
  CHECK(std::fabs(scaled / gauss - 1.0) < 0.05);
}

TEST_CASE("local-limit series") {
  MarkovShift s = make_shift(full(3));
  Potential pot = make_potential(s, constant_table(3, log3v));
  GibbsData gd = leading_triple(s, pot);
  Displacement f = make_displacement(s, {{-1}, {0}, {1}});
  LltSeries ser = llt_series(s, gd.r_hat, f, gd, {60.0, 120.0}, 0, {0});
  CHECK(std::fabs(ser.window_width - log3v) < 1e-9);
  CHECK(std::fabs(ser.r_bar - log3v) < 1e-9);
  CHECK(std::fabs(ser.sigma[0][0] - 2.0 / 3.0) < 1e-5);
  double lim = 1.0 / std::sqrt(2.0 * M_PI * (2.0 / 3.0)) * std::sqrt(log3v);
  CHECK(std::fabs(ser.predicted_limit - lim) < 1e-5);
  for (std::size_t i = 0; i < ser.t.size(); ++i) {
    CAPTURE(ser.t[i]);
    CHECK(std::fabs(ser.scaled[i] / ser.predicted_limit - 1.0) < 0.05);
  }

  // d = 0: the series stabilizes exactly at the predicted limit 1
  MarkovShift s2 = make_shift(full(2));
  Potential p2 = make_potential(s2, constant_table(2, log2v));
  GibbsData g2 = leading_triple(s2, p2);
  Displacement f2 = make_displacement(s2, {{}, {}});
  LltSeries flat = llt_series(s2, g2.r_hat, f2, g2, {5.0, 9.0}, 1, {});
  CHECK(std::fabs(flat.predicted_limit - 1.0) < 1e-9);
  CHECK(std::fabs(flat.scaled[0] - 1.0) < 1e-9);
  CHECK(std::fabs(flat.scaled[1] - 1.0) < 1e-9);

  // parity walk: the cocycle is periodic and must be refused
  Displacement fp = make_displacement(s2, {{-1}, {1}});
  CHECK(throws_kind([&] { llt_series(s2, g2.r_hat, fp, g2, {5.0}, 0, {0}); },
                    ErrKind::periodic_cocycle));
}
