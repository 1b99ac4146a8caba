#pragma once
#include <functional>
#include <vector>

#include "covermix/errors.hpp"

namespace covermix {

// Adaptive Gauss-Kronrod (G7, K15) quadrature of f over [a, b].  Intervals
// split until the embedded error estimate passes the tolerance; evaluation
// and summation order are fixed, so results are bit-reproducible.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, double abs_tol = 0.0,
                    int max_depth = 48);

struct NormIntegral {
  double value = 0.0;
  double rel_error = 0.0;  // achieved/estimated relative error
  bool deterministic = true;  // false for the quasi-random high-dim path
};

// I(A, xi) = Integral over R^p of cos(<xi, u>) * exp(-n(u)) du with
// n(u) = sum_j |(A u)_j|, which must be a norm (A has full column rank).
// Radial integration is closed-form: I = Integral over S^{p-1} of
// Re[ Gamma(p) / (n(w) - i <xi, w>)^p ] dw.  The sphere factor is computed
// closed-form for p = 1, by kink-split adaptive quadrature for p = 2, by
// nested adaptive quadrature for p = 3, and by Halton quasi-random sampling
// with a reported error estimate for p > 3.  xi may be empty (treated as 0).
NormIntegral norm_exp_integral(const std::vector<std::vector<double>>& A,
                               int p, const std::vector<double>& xi = {},
                               double rel_tol = 1e-9);

// Radical-inverse Halton value in [0, 1) for the given 1-based index.
double halton(unsigned long long index, unsigned base);

}  // namespace covermix
