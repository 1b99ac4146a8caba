#include "covermix/fit.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace covermix {

namespace {

// Shared core: given per-point z0_i = log(value_i) - log(base_i) and
// log-abscissas l_i = log(T_i) with weights w_i, fit z0 + alpha*l = const
// for each candidate alpha and pick the smallest weighted RMS residual.
FitReport fit_core(const std::vector<double>& z0, const std::vector<double>& l,
                   const std::vector<double>& w,
                   const std::vector<double>& alphas) {
  if (alphas.empty()) fail(ErrKind::validation, "no candidate exponents supplied");
  FitReport rep;
  rep.alphas = alphas;
  rep.constants.resize(alphas.size());
  rep.residuals.resize(alphas.size());
  double wsum = 0.0;
  for (double wi : w) wsum += wi;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double a = alphas[k];
    double mean = 0.0;
    for (std::size_t i = 0; i < z0.size(); ++i) mean += w[i] * (z0[i] + a * l[i]);
    mean /= wsum;
    double ss = 0.0;
    for (std::size_t i = 0; i < z0.size(); ++i) {
      const double r = z0[i] + a * l[i] - mean;
      ss += w[i] * r * r;
    }
    rep.constants[k] = std::exp(mean);
    rep.residuals[k] = std::sqrt(ss / wsum);
    if (rep.residuals[k] < best) {
      best = rep.residuals[k];
      rep.selected_index = k;
    }
  }
  rep.selected_alpha = alphas[rep.selected_index];
  rep.selected_constant = rep.constants[rep.selected_index];
  rep.poor_fit = rep.residuals[rep.selected_index] > rep.poor_fit_threshold;
  return rep;
}

}  // namespace

FitReport fit_exponent_series(const std::vector<double>& T,
                              const std::vector<long long>& N, double t_lo,
                              double t_hi, const std::vector<double>& alphas) {
  if (T.size() != N.size())
    fail(ErrKind::validation, "grid and count arrays differ in length");
  std::vector<double> z0, l, w;
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (T[i] < t_lo || T[i] > t_hi) continue;
    if (T[i] <= 0.0)
      fail(ErrKind::validation, "window abscissas must be positive");
    if (N[i] <= 0)
      fail(ErrKind::insufficient_data,
           "count is zero inside the fit window at T=" + std::to_string(T[i]));
    // Model N ~ C e^T T^{-alpha}:  z0 = log N - T.
    z0.push_back(std::log(static_cast<double>(N[i])) - T[i]);
    l.push_back(std::log(T[i]));
    w.push_back(1.0);
  }
  if (z0.size() < 5)
    fail(ErrKind::insufficient_data,
         "need at least 5 grid points inside the fit window, have " +
             std::to_string(z0.size()));
  return fit_core(z0, l, w, alphas);
}

FitReport fit_decay_series(const std::vector<double>& t,
                           const std::vector<double>& est,
                           const std::vector<double>& stderr_,
                           double t_lo, double t_hi,
                           const std::vector<double>& alphas) {
  if (t.size() != est.size() || t.size() != stderr_.size())
    fail(ErrKind::validation, "time, estimate, and error arrays differ in length");
  std::vector<double> z0, l, w;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (t[i] <= 0.0)
      fail(ErrKind::validation, "window abscissas must be positive");
    if (!(est[i] > 0.0))
      fail(ErrKind::insufficient_data,
           "estimate is nonpositive inside the fit window at t=" +
               std::to_string(t[i]));
    if (!(stderr_[i] > 0.0))
      fail(ErrKind::validation, "standard errors must be positive");
    // Model est ~ C t^{-alpha}:  z0 = log est.
    z0.push_back(std::log(est[i]));
    l.push_back(std::log(t[i]));
    w.push_back(1.0 / (stderr_[i] * stderr_[i]));
  }
  if (z0.size() < 5)
    fail(ErrKind::insufficient_data,
         "need at least 5 grid points inside the fit window, have " +
             std::to_string(z0.size()));
  return fit_core(z0, l, w, alphas);
}

}  // namespace covermix
