#pragma once
#include <vector>

#include "covermix/cover.hpp"
#include "covermix/fit.hpp"
#include "covermix/presentation.hpp"

namespace covermix {

enum class CountKind { orbit, geodesic };

// Cumulative counting series N(T) on a strictly increasing grid, together
// with the experiment's full configuration so a fit can recover the
// predicted exponent from the cover invariants.
struct CountSeries {
  CountKind kind = CountKind::orbit;
  std::vector<double> T;
  std::vector<long long> N;  // nondecreasing by construction
  GroupPresentation group;
  CoverSpec spec;
  PointH2 x{0.0, 1.0};        // orbit experiments: observation point
  PointH2 y{0.0, 1.0};        // orbit experiments: orbit base point
  std::vector<long long> xi;  // geodesic experiments: homology class
};

struct CountOptions {
  double margin = 4.0;       // enumeration pruning slack (never affects counts)
  long long max_nodes = 0;   // step budget, 0 = unlimited -> BudgetExceeded
  bool parallel = true;      // orbit enumeration only; counts are identical
};

// N(T_i) = #{ gamma in ker(phi) : dist(x, gamma y) < T_i }  (strict).
// Exact integer counts from one enumeration pass over the largest radius.
CountSeries orbit_count(const GroupPresentation& g, const CoverSpec& spec,
                        PointH2 x, PointH2 y,
                        const std::vector<double>& T_grid,
                        const CountOptions& opt = {});

// N(T_i) = # oriented primitive hyperbolic conjugacy classes with
// translation length <= T_i (closed) and phi(abelianize(class)) = xi.
CountSeries geodesic_count(const GroupPresentation& g, const CoverSpec& spec,
                           const std::vector<long long>& xi,
                           const std::vector<double>& T_grid,
                           const CountOptions& opt = {});

// Exponent discrimination for N(T) ~ C e^T T^{-alpha} over T in
// [t_lo, t_hi]; also records the exponent the cover invariants predict
// (p + h/2 for orbit series, p + h/2 + 1 for geodesic series).
FitReport fit_exponent(const CountSeries& s, double t_lo, double t_hi,
                       const std::vector<double>& alphas);

}  // namespace covermix
