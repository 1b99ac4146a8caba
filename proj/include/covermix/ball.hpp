#pragma once
#include <functional>
#include <vector>

#include "covermix/presentation.hpp"

namespace covermix {

struct BallOptions {
  double margin = 4.0;      // pruning slack added to the radius; enlarging it
                            // can only add elements (tested), never remove any
  PointH2 x{0.0, 1.0};      // observation point
  PointH2 y{0.0, 1.0};      // orbit base point
  long long max_nodes = 0;  // DFS step budget, 0 = unlimited; exceeding it
                            // raises ErrKind::budget_exceeded
};

struct BallElement {
  Word w;
  Moebius g;
  double dist = 0.0;  // dist(x, g.y)
};

using BallVisitor =
    std::function<void(const Word&, const Moebius&, double dist)>;

// Streams every group element g with dist(x, g.y) < radius (strict), each
// exactly once, in a fixed depth-first word order.  Serial reference.
void enumerate_ball_serial(const GroupPresentation& g, double radius,
                           const BallVisitor& visit,
                           const BallOptions& opt = {});

std::vector<BallElement> ball_serial(const GroupPresentation& g, double radius,
                                     const BallOptions& opt = {});

// OpenMP kernel: subtrees below the first syllable are enumerated in
// parallel and merged in subtree order, so the result matches ball_serial
// element for element at any thread count.
std::vector<BallElement> ball_parallel(const GroupPresentation& g,
                                       double radius,
                                       const BallOptions& opt = {});

long long ball_count_serial(const GroupPresentation& g, double radius,
                            const BallOptions& opt = {});
long long ball_count_parallel(const GroupPresentation& g, double radius,
                              const BallOptions& opt = {});

}  // namespace covermix
