#pragma once
#include "covermix/presentation.hpp"

namespace covermix {

struct ReduceOptions {
  double height_cutoff = 1e6;  // horoball depth beyond which we give up
  long max_iter = 10'000'000;
  double slack = 1e-12;
};

// evaluate(w) * z_out == z_in; z_out lies in the fundamental polygon.
struct ReducedPoint {
  PointH2 z;
  Word w;
  long steps = 0;
};

ReducedPoint reduce_point(const GroupPresentation& g, const PointH2& z,
                          const ReduceOptions& opt = {});

// parabolic fixed points of the cusp words (nullopt encodes infinity)
std::vector<std::optional<double>> cusp_points(const GroupPresentation& g);

}  // namespace covermix
