#pragma once
#include <functional>
#include <vector>

#include "covermix/ball.hpp"

namespace covermix {

// One oriented hyperbolic conjugacy class of the side-pairing group, named by
// its canonical necklace: the lexicographically least rotation of the
// cyclically reduced word.  Classes are ORIENTED -- [w] and [w^{-1}] are
// separate entries; they describe the two traversal directions of the same
// closed geodesic.  The trace is reported as a nonnegative integer (it is
// only defined up to sign for projective matrices).
struct ConjClass {
  Word necklace;
  mpz_class trace;
  double length = 0.0;    // translation length, 2*arccosh(trace/2)
  bool primitive = true;  // false when the cyclic word is a proper power
};

struct ConjOptions {
  // Classes are collected from the ball of radius max_len + search_margin
  // around the origin: a class of translation length L moves the origin by at
  // most L + 2*log(cosh(D)) for some conjugate, where D bounds the distance
  // from the origin to a lift of the closed geodesic's axis.  Every closed
  // geodesic crosses the compact core of the quotient surface, which keeps D
  // small for the supported groups; the default margin is validated by exact
  // agreement with a brute-force oracle at small length and by requiring the
  // class count to be stable when the margin is enlarged.
  double search_margin = 4.0;
  // Backtrack margin for the underlying ball search (see BallOptions::margin).
  double prune_margin = 4.0;
  long long max_nodes = 0;  // 0 = unlimited, else BudgetExceeded past the cap
};

// Called once per class, in a fixed serial discovery order, with the necklace
// letters, the class trace, the translation length, and the primitive flag.
using ConjVisitor = std::function<void(const std::vector<Letter>&,
                                       const mpz_class&, double, bool)>;

// Streams one representative per oriented hyperbolic conjugacy class with
// translation_length <= max_len (closed bound).  Identity and parabolic
// classes never appear.  max_len must lie in [0, 80].
void enumerate_conjugacy_stream(const GroupPresentation& g, double max_len,
                                const ConjOptions& opt,
                                const ConjVisitor& visit);

// Collecting form, sorted by (length, necklace key).
std::vector<ConjClass> enumerate_conjugacy_classes(const GroupPresentation& g,
                                                   double max_len,
                                                   const ConjOptions& opt = {});

}  // namespace covermix
