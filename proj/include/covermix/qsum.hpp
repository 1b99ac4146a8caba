#pragma once
#include <vector>

#include "covermix/shift.hpp"

namespace covermix {

// Compactly supported step function: a finite union of disjoint weighted
// intervals with explicit endpoint inclusion.  Evaluation is exact.
struct StepWindow {
  struct Piece {
    double lo = 0.0, hi = 0.0;
    double height = 1.0;
    bool include_lo = true, include_hi = true;
  };
  std::vector<Piece> pieces;  // sorted, disjoint

  double lo() const;                  // support lower bound
  double hi() const;                  // support upper bound
  double operator()(double s) const;  // pointwise value
  double integral() const;            // sum of height * length
};

// Validates pieces (finite endpoints, lo <= hi, pairwise disjoint after
// sorting).  Infinite endpoints raise ErrKind::unbounded_window.
StepWindow make_window(std::vector<StepWindow::Piece> pieces);
StepWindow indicator_window(double lo, double hi, bool include_lo = true,
                            bool include_hi = true);

// Cross-correlation of step windows: integral of u1(s + c) u2(s) ds,
// in closed form (piecewise linear in c; endpoint inclusion is immaterial
// under the integral).
double window_cross(const StepWindow& u1, const StepWindow& u2, double c);

struct QSumOptions {
  long long max_nodes = 0;  // DP extension budget, 0 = unlimited
};

// The symbolic window sum
//   Q_t = sum over n >= 0 and paths y_0 -> ... -> y_{n-1} -> x of
//         exp(-rhat_n) * Phi(y_0) psi(y_0) * [f(y_0)+...+f(y_{n-1}) = xi]
//         * u(rhat_n - t),
// where rhat_n is the weight of the n edges (the last one entering x).
// Finite because the normalized roof admits a positive path certificate
// (found automatically; its absence is a validation error).  Computed by
// dynamic programming over (state, accumulated displacement, accumulated
// roof) with exact-rational weight merging, so the result is bit-identical
// to an exhaustive path sum that groups contributions the same way.
double q_sum(const MarkovShift& s, const std::vector<std::vector<double>>& r_hat,
             const Displacement& f, const std::vector<double>& psi,
             const std::vector<double>& Phi, const StepWindow& u, int x,
             const std::vector<long long>& xi, double t,
             const QSumOptions& opt = {});

// Product-form observable Phi(x) * delta_xi * u(s).
struct ProductObservable {
  std::vector<double> Phi;
  std::vector<long long> xi;
  StepWindow u;
};

struct ItPair {
  double direct = 0.0;
  double unfolded = 0.0;
};

// Correlation sum I_t(Psi1, Psi2) computed two independent ways: `direct`
// sums over forward orbit segments against the invariant measure (weights
// psi(a_0) e^{-rhat_n} rho(a_n) on cylinders), `unfolded` integrates Psi1
// against the window sum Q_{t-s} in the eigenmeasure rho.  Both carry the
// prefactor m0 / (integral of r_hat d nu).  Their agreement is the
// unfolding identity.
ItPair i_t(const MarkovShift& s, const std::vector<std::vector<double>>& r_hat,
           const Displacement& f, const GibbsData& gd, double m0,
           const ProductObservable& psi1, const ProductObservable& psi2,
           double t, const QSumOptions& opt = {});

struct LltOptions {
  long long max_nodes = 0;
  int theta_grid = 64;     // aperiodicity scan resolution per dimension
  double fd_step = 1e-3;   // finite-difference step for the covariance
};

// Scaled window-sum series t^{d/2} Q_t (internal Phi = 1 and a centered
// window: width = the common edge weight when the roof is arithmetic,
// else 1), with the Gaussian local-limit prediction
//   (2 pi)^{-d/2} (det Sigma)^{-1/2} rbar^{d/2-1} * width * psi(x),
// Sigma from second differences of log |lambda(theta, 0)| at 0 and
// rbar = integral of r_hat d nu.
struct LltSeries {
  std::vector<double> t;
  std::vector<double> scaled;  // t^{d/2} Q_t
  double predicted_limit = 0.0;
  std::vector<std::vector<double>> sigma;
  double r_bar = 0.0;
  double window_width = 0.0;
};

// Requires the displacement cocycle to be aperiodic: |lambda(theta, 0)| = 1
// anywhere off theta = 0 on the scan grid raises ErrKind::periodic_cocycle.
LltSeries llt_series(const MarkovShift& s,
                     const std::vector<std::vector<double>>& r_hat,
                     const Displacement& f, const GibbsData& gd,
                     const std::vector<double>& t_grid, int x,
                     const std::vector<long long>& xi,
                     const LltOptions& opt = {});

// nu-average of the edge table: sum over edges of
// psi(a) exp(-r_hat(a,b)) rho(b) r_hat(a,b).
double mean_roof(const MarkovShift& s, const GibbsData& gd);

}  // namespace covermix
