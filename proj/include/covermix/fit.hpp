#pragma once
#include <cstddef>
#include <limits>
#include <vector>

#include "covermix/errors.hpp"

namespace covermix {

// Result of discriminating candidate polynomial-correction exponents.
// The growth model is value(T) ~ C * base(T) / T^alpha, where base is e^T
// for counting series and 1 for decay series; for each candidate alpha the
// best constant C and the root-mean-square residual of
// log(value) - log(base) + alpha*log(T) around log(C) are recorded.
struct FitReport {
  std::vector<double> alphas;
  std::vector<double> constants;
  std::vector<double> residuals;
  std::size_t selected_index = 0;
  double selected_alpha = 0.0;
  double selected_constant = 0.0;
  // A residual this large at the best candidate means none of the models
  // explains the data (threshold pinned here, reported for transparency).
  double poor_fit_threshold = 0.25;
  bool poor_fit = false;
  // Exponent predicted by theory for the experiment behind the data; NaN
  // when the caller has no prediction.  Informational only.
  double predicted_alpha = std::numeric_limits<double>::quiet_NaN();
};

// Least-squares exponent discrimination for N(T) ~ C e^T T^{-alpha} on the
// grid points with T in [t_lo, t_hi].  Needs >= 5 points in the window and
// N > 0 throughout it; raises InsufficientData otherwise.
FitReport fit_exponent_series(const std::vector<double>& T,
                              const std::vector<long long>& N, double t_lo,
                              double t_hi, const std::vector<double>& alphas);

// Weighted variant for decaying estimates, model est(t) ~ C t^{-alpha},
// weights 1/stderr^2.  Points with t in [t_lo, t_hi]; est > 0 and
// stderr > 0 required throughout the window.
FitReport fit_decay_series(const std::vector<double>& t,
                           const std::vector<double>& est,
                           const std::vector<double>& stderr_,
                           double t_lo, double t_hi,
                           const std::vector<double>& alphas);

}  // namespace covermix
