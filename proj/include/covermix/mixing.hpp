#pragma once
#include <cstdint>
#include <vector>

#include "covermix/cover.hpp"
#include "covermix/fit.hpp"
#include "covermix/moebius.hpp"
#include "covermix/presentation.hpp"
#include "covermix/reduce.hpp"

namespace covermix {

// Flow box: an axis-aligned base rectangle in fundamental-domain
// coordinates, an angle arc, and a deck sheet.  Mass element
// dx dy / y^2 on the base times probability measure on the fiber circle,
// so the whole unit tangent bundle has mass equal to the surface area.
struct FlowBox {
  double x1 = 0.0, x2 = 0.0;          // base x-range
  double y1 = 1.0, y2 = 1.0;          // base y-range, 0 < y1 < y2
  double theta1 = 0.0, theta2 = 0.0;  // angle arc, 0 < theta2-theta1 <= 2 pi
  std::vector<long long> xi;          // sheet
};

// Closed-form mass: (x2-x1) * (1/y1 - 1/y2) * (theta2-theta1)/(2 pi).
// Degenerate extent raises ErrKind::zero_mass.
double haar_mass(const FlowBox& box);

// Structural validation: finite fields, ordered ranges, positive mass,
// sheet dimension d, and the base rectangle inside the closure of the
// fundamental polygon (checked side by side in closed form).
void validate_box(const GroupPresentation& g, const FlowBox& box, int d);

struct BoxSample {
  UnitTangent v;
  std::vector<long long> xi;
};

// The index-th sample of the stream named by seed: base point distributed
// as dx dy/y^2 (x uniform, y by inverse CDF), angle uniform on the arc.
// Pure function of (box, seed, index) -- parallel workers drawing disjoint
// index ranges reproduce the serial stream exactly.
BoxSample sample_box(const FlowBox& box, std::uint64_t seed,
                     std::uint64_t index);

struct FlowResult {
  UnitTangent v;                // reduced to the fundamental domain
  std::vector<long long> xi;    // sheet after deck bookkeeping
  long reductions = 0;          // total side crossings applied
};

// Flow for time t in legs of at most dt, reducing to the fundamental
// polygon after each leg; every reduction word w shifts the sheet by
// +phi(abelianize(w)).  ErrKind::cusp_escape propagates from reduction.
struct FlowOptions {
  double dt = 0.5;
  ReduceOptions reduce;
};
FlowResult flow_and_reduce(const GroupPresentation& g, const CoverSpec& spec,
                           const UnitTangent& v, std::vector<long long> xi,
                           double t, const FlowOptions& opt = {});

struct MixingPoint {
  double t = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;   // retained samples
  long long discards = 0;  // cusp-escaped samples (excluded)
};

// Correlation measurements over a t grid, with the experiment's full
// configuration so a fit can recover the predicted decay exponent.
struct MixingSeries {
  std::vector<MixingPoint> points;
  GroupPresentation group;
  CoverSpec spec;
};

struct MixingOptions {
  std::uint64_t seed = 1;
  bool parallel = true;               // estimates identical either way
  double max_discard_fraction = 1e-3; // beyond this the run is rejected
  FlowOptions flow;
};

// Monte Carlo estimate of the correlation of two flow-box indicators:
// sample from B, flow by t, test membership in A (base rectangle, arc,
// and sheet); estimate = mass(B) * hit fraction, standard error from the
// binomial sample variance.  Requires n >= 1000.
MixingPoint matrix_coefficient(const GroupPresentation& g,
                               const CoverSpec& spec, const FlowBox& boxA,
                               const FlowBox& boxB, double t, long long n,
                               const MixingOptions& opt = {});

MixingSeries matrix_coefficient_series(const GroupPresentation& g,
                                       const CoverSpec& spec,
                                       const FlowBox& boxA,
                                       const FlowBox& boxB,
                                       const std::vector<double>& t_grid,
                                       long long n,
                                       const MixingOptions& opt = {});

// Exponent discrimination for estimate(t) ~ C t^{-alpha} over [t_lo, t_hi],
// weighted by 1/stderr^2; records the predicted exponent p + h/2.
FitReport decay_fit(const MixingSeries& s, double t_lo, double t_hi,
                    const std::vector<double>& alphas);

}  // namespace covermix
