// Cover invariants (p, h), residue matrices, norm integrals, the limit
// constant against closed-form oracles, and exponent-fit scaffolding.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "covermix/cover.hpp"
#include "covermix/errors.hpp"
#include "covermix/fit.hpp"
#include "covermix/presentation.hpp"
#include "covermix/quadrature.hpp"
#include "covermix/word.hpp"
#include "oracles.hpp"

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

}  // namespace

TEST_CASE("deterministic quadrature") {
  CHECK(integrate_1d([](double x) { return std::sin(x); }, 0, kPi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_1d([](double x) { return x * x; }, 0, 1) ==
        doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(integrate_1d([](double x) { return std::exp(-50 * x * x); }, -10,
                     10) ==
        doctest::Approx(std::sqrt(kPi / 50)).epsilon(1e-12));
  // bit-reproducible
  auto f = [](double x) { return std::cos(7 * x) / (1 + x * x); };
  CHECK(integrate_1d(f, -3, 5) == integrate_1d(f, -3, 5));
}

TEST_CASE("norm-exponential integrals against closed forms") {
  {  // 1d: integral of exp(-|u|) is 2; twisted by xi: 2/(1+xi^2)
    NormIntegral r = norm_exp_integral({{1.0}}, 1);
    CHECK(r.deterministic);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(norm_exp_integral({{0.5}}, 1).value ==
          doctest::Approx(4.0).epsilon(1e-13));
    CHECK(norm_exp_integral({{1.0}}, 1, {3.0}).value ==
          doctest::Approx(0.2).epsilon(1e-13));
    CHECK(norm_exp_integral({{1.0}, {-1.0}}, 1).value ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
  {  // 2d product and hexagonal norms
    CHECK(norm_exp_integral({{1, 0}, {0, 1}}, 2).value ==
          doctest::Approx(4.0).epsilon(1e-8));
    CHECK(norm_exp_integral({{1, 0}, {0, 1}, {1, 1}}, 2).value ==
          doctest::Approx(oracles::hex_norm_unit_integral()).epsilon(1e-8));
    CHECK(norm_exp_integral({{1, 0}, {0, 1}}, 2, {2.0, 0.0}).value ==
          doctest::Approx(0.8).epsilon(1e-8));
  }
  {  // 3d product: 8
    NormIntegral r =
        norm_exp_integral({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3, {}, 1e-6);
    CHECK(r.deterministic);
    CHECK(r.value == doctest::Approx(8.0).epsilon(1e-4));
  }
  {  // 4d switches to the quasi-random rule with a reported error
    NormIntegral r = norm_exp_integral(
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 4);
    CHECK(!r.deterministic);
    CHECK(std::fabs(r.value - 16.0) < 16.0 * 6 * (r.rel_error + 1e-4));
  }
}

TEST_CASE("gamma2 homology cover invariants") {
  GroupPresentation g2 = preset_gamma2();
  CoverSpec s{2, {{1, 0}, {0, 1}}};
  CoverInvariants inv = invariants(g2, s);
  CHECK(inv.d == 2);
  CHECK(inv.p == 2);
  CHECK(inv.h == 0);
  CHECK(inv.m0 == doctest::Approx(2 * kPi).epsilon(1e-12));
  REQUIRE(inv.residue_matrix.size() == 3);
  CHECK(inv.residue_matrix[0] == std::vector<long long>{1, 0});
  CHECK(inv.residue_matrix[1] == std::vector<long long>{0, -1});
  CHECK(inv.residue_matrix[2] == std::vector<long long>{-1, 1});
  REQUIRE(inv.basis_ep.size() == 2);
  CHECK(inv.basis_eh.empty());
  // orthonormal spanning set for E_p
  double d00 = 0, d01 = 0, d11 = 0;
  for (int j = 0; j < 2; ++j) {
    d00 += inv.basis_ep[0][std::size_t(j)] * inv.basis_ep[0][std::size_t(j)];
    d01 += inv.basis_ep[0][std::size_t(j)] * inv.basis_ep[1][std::size_t(j)];
    d11 += inv.basis_ep[1][std::size_t(j)] * inv.basis_ep[1][std::size_t(j)];
  }
  CHECK(d00 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d11 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(d01) < 1e-12);

  // residue norm: sum over cusps of |row . xi| / m0
  CHECK(p_norm(inv, {1.0, 0.0}) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(p_norm(inv, {1.0, 1.0}) ==
        doctest::Approx(2.0 / (2 * kPi)).epsilon(1e-12));

  ConstantC cc = constant_c(inv, std::nullopt);
  CHECK(cc.exact);
  CHECK(std::fabs(cc.c - oracles::c_oracle_gamma2_homology()) < 1e-6);
  CHECK(cc.h_factor == 1.0);
  CHECK(cc.p_factor ==
        doctest::Approx(1.5 * (2 * kPi) * (2 * kPi)).epsilon(1e-4));

  // the density at 0 ties back to c, and decays away from 0
  double f0 = limit_density(inv, std::nullopt, {0.0, 0.0});
  CHECK(f0 == doctest::Approx(cc.c * inv.m0).epsilon(1e-8));
  double f1 = limit_density(inv, std::nullopt, {1.0, 0.5});
  CHECK(f1 < f0);
  CHECK(f1 > 0);
}

TEST_CASE("gamma2 rank-1 cover") {
  GroupPresentation g2 = preset_gamma2();
  CoverSpec s{1, {{1, 0}}};
  CoverInvariants inv = invariants(g2, s);
  CHECK(inv.d == 1);
  CHECK(inv.p == 1);
  CHECK(inv.h == 0);
  CHECK(inv.residue_matrix ==
        std::vector<std::vector<long long>>{{1}, {0}, {-1}});
  ConstantC cc = constant_c(inv, std::nullopt);
  CHECK(cc.exact);
  CHECK(std::fabs(cc.c - oracles::c_oracle_gamma2_rank1()) < 1e-9);
  // kernel membership of the projection
  CHECK(kernel_member(s, Word::from_indices({2}, 2)));
  CHECK(!kernel_member(s, Word::from_indices({1}, 2)));
  CHECK(kernel_member(s, Word::from_indices({1, 2, -1, -2}, 2)));
}

TEST_CASE("punctured torus: fully harmonic cover") {
  GroupPresentation tor = preset_punctured_torus();
  CoverSpec s{2, {{1, 0}, {0, 1}}};
  CoverInvariants inv = invariants(tor, s);
  CHECK(inv.d == 2);
  CHECK(inv.p == 0);
  CHECK(inv.h == 2);
  REQUIRE(inv.residue_matrix.size() == 1);
  CHECK(inv.residue_matrix[0] == std::vector<long long>{0, 0});
  CHECK(inv.m0 == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(p_norm(inv, {5.0, -3.0}) == doctest::Approx(0.0));

  // without a Gram matrix the harmonic factor is a placeholder
  ConstantC loose = constant_c(inv, std::nullopt);
  CHECK(!loose.exact);
  CHECK(loose.h_factor == 1.0);
  CHECK(throws_kind([&] { constant_c(inv, std::nullopt, true); },
                    ErrKind::gram_missing));

  HGram q{{{1.0, 0.0}, {0.0, 1.0}}};
  ConstantC cc = constant_c(inv, q);
  CHECK(cc.exact);
  // p = 0 leaves only the Gaussian factor: (2 pi)^{-d} (2 pi)^{h/2} / m0
  // with unit Gram: 1 / (8 pi^2) ... assembled independently:
  double want = std::pow(2 * kPi, -2.0) * (2 * kPi) / (2 * kPi);
  CHECK(cc.c == doctest::Approx(want).epsilon(1e-12));
  CHECK(cc.c == doctest::Approx(1.0 / (8 * kPi * kPi)).epsilon(1e-12));

  CHECK(throws_kind([&] { limit_density(inv, std::nullopt, {0.0, 0.0}); },
                    ErrKind::gram_missing));
  double f0 = limit_density(inv, q, {0.0, 0.0});
  CHECK(f0 == doctest::Approx(cc.c * inv.m0).epsilon(1e-12));
  // Gaussian profile: F(xi) = F(0) exp(-|xi|^2 / 4) for the unit Gram
  double f1 = limit_density(inv, q, {2.0, 0.0});
  CHECK(f1 == doctest::Approx(f0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("cover validation and degenerate specs") {
  GroupPresentation g2 = preset_gamma2();
  CHECK(throws_kind([&] { invariants(g2, CoverSpec{1, {{2, 0}}}); },
                    ErrKind::not_surjective));
  CHECK(throws_kind([&] { invariants(g2, CoverSpec{2, {{1, 0}, {2, 0}}}); },
                    ErrKind::not_surjective));
  CHECK(throws_kind([&] { invariants(g2, CoverSpec{1, {{1}}}); },
                    ErrKind::validation));

  // d = 0: trivial cover, everything in the kernel, c = 1/m0
  CoverSpec z{0, {}};
  CoverInvariants inv = invariants(g2, z);
  CHECK(inv.d == 0);
  CHECK(inv.p == 0);
  CHECK(inv.h == 0);
  CHECK(kernel_member(z, Word::from_indices({1, 2}, 2)));
  ConstantC cc = constant_c(inv, std::nullopt);
  CHECK(cc.exact);
  CHECK(cc.c == doctest::Approx(1.0 / inv.m0).epsilon(1e-15));
}

TEST_CASE("constant is invariant under unimodular basis changes") {
  GroupPresentation g2 = preset_gamma2();
  CoverSpec s{2, {{1, 1}, {0, 1}}};
  CoverInvariants inv = invariants(g2, s);
  CHECK(inv.p == 2);
  CHECK(inv.h == 0);
  ConstantC cc = constant_c(inv, std::nullopt);
  CHECK(std::fabs(cc.c - oracles::c_oracle_gamma2_homology()) < 1e-6);
}

TEST_CASE("exponent fit discrimination on synthetic counts") {
  std::vector<double> T;
  std::vector<long long> N;
  for (int k = 20; k <= 40; ++k) {
    double t = k;
    T.push_back(t);
    N.push_back(
        (long long)std::llround(std::exp(t) * (1.0 / t) * (1 + 5.0 / t)));
  }
  FitReport r = fit_exponent_series(T, N, 20, 40, {0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(r.selected_alpha == 1.0);
  CHECK(!r.poor_fit);
  CHECK(r.selected_constant == doctest::Approx(1.0).epsilon(0.25));
  // too few points in the window
  CHECK(throws_kind([&] { fit_exponent_series(T, N, 20, 23, {1.0}); },
                    ErrKind::insufficient_data));
  // zero counts invalidate the log fit
  std::vector<long long> Nz = N;
  Nz[5] = 0;
  CHECK(throws_kind([&] { fit_exponent_series(T, Nz, 20, 40, {1.0}); },
                    ErrKind::insufficient_data));
}

TEST_CASE("weighted decay fit") {
  std::vector<double> t, est, se;
  for (int k = 4; k <= 12; ++k) {
    t.push_back(k);
    est.push_back(0.7 * std::pow(double(k), -0.5));
    se.push_back(0.01);
  }
  FitReport r = fit_decay_series(t, est, se, 4, 12, {0.5, 1.0, 1.5});
  CHECK(r.selected_alpha == 0.5);
  CHECK(r.selected_constant == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(r.residuals[std::size_t(r.selected_index)] ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(throws_kind([&] { fit_decay_series(t, est, se, 4, 12, {}); },
                    ErrKind::validation));
}
