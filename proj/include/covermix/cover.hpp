#pragma once
#include <optional>
#include <vector>

#include "covermix/presentation.hpp"

namespace covermix {

// Homomorphism from the side-pairing group onto Z^d, given on abelianized
// generators: column i of phi is the image of generator i.  Must be
// surjective (all Smith-form elementary divisors 1); d = 0 is the degenerate
// "no cover" spec whose kernel is the whole group.
struct CoverSpec {
  int d = 0;
  std::vector<std::vector<long long>> phi;  // d rows x k columns
  int rank() const { return d == 0 ? 0 : int(phi.at(0).size()); }
};

// Optional Gram matrix for the quadratic norm on E_h, expressed in the
// orthonormal basis reported by invariants().  Supplied externally; the
// harmonic-form computation behind it is out of scope.
struct HGram {
  std::vector<std::vector<double>> q;  // h x h symmetric positive definite
};

struct CoverInvariants {
  std::vector<std::vector<long long>> residue_matrix;  // one row per cusp
  int d = 0;
  int p = 0;  // rank of the residue matrix, computed exactly
  int h = 0;  // d - p
  std::vector<std::vector<double>> basis_ep;  // p orthonormal rows, length d
  std::vector<std::vector<double>> basis_eh;  // h orthonormal rows, length d
  double m0 = 0.0;                            // hyperbolic area of the base
};

// Validates the spec against the presentation (column count, surjectivity)
// and computes residue rows phi(abelianize(cusp word)), the exact rank
// decomposition d = p + h, and orthonormal bases with E_p = (ker R)^perp.
CoverInvariants invariants(const GroupPresentation& g, const CoverSpec& spec);

// (1/m0) * sum_j |(R x)_j| for an ambient vector x; vanishes on E_h, so it
// measures only the E_p component (the quotient-norm semantics).
double p_norm(const CoverInvariants& inv, const std::vector<double>& x);

struct ConstantC {
  double c = 0.0;         // (1/((2pi)^d m0)) * p_factor * h_factor
  double p_factor = 0.0;  // integral of exp(-p_norm) over E_p
  double h_factor = 0.0;  // pi^{h/2}/sqrt(det Q), or 1 when unavailable
  double rel_error = 0.0;
  bool exact = false;  // false when the h-part is missing or p > 3 sampling
};

// The rate constant of the counting asymptotics.  With h > 0 and no Gram
// matrix the h-factor is left at 1 and exact=false, unless require_exact is
// set, in which case GramMissing is raised.
ConstantC constant_c(const CoverInvariants& inv,
                     const std::optional<HGram>& gram,
                     bool require_exact = false, double quad_rel_tol = 1e-9);

// true iff phi . abelianize(w) == 0, i.e. w lies in the cover's deck kernel.
bool kernel_member(const CoverSpec& spec, const Word& w);

// Fourier-side limit density F(xi) = F_p(xi) * F_h(xi) with
// F_p = (2pi)^{-p} Integral exp(i<xi,x> - p_norm(x)) dx over E_p and
// F_h the corresponding Gaussian factor over E_h; F(0)/m0 equals c.
// Raises GramMissing when h > 0 and no Gram matrix is supplied.
double limit_density(const CoverInvariants& inv,
                     const std::optional<HGram>& gram,
                     const std::vector<double>& xi,
                     double quad_rel_tol = 1e-9);

}  // namespace covermix
