#pragma once
#include <complex>
#include <string>
#include <vector>

namespace covermix {

// Finite topological Markov shift.  States are 0..n-1 (labels optional);
// transition is a 0/1 matrix with no all-zero rows.  `mixing` records
// primitivity (some power of the transition matrix is strictly positive),
// established at construction.
struct MarkovShift {
  int n = 0;
  std::vector<std::string> labels;            // size n, possibly generated
  std::vector<std::vector<int>> transition;   // n x n over {0,1}
  bool mixing = false;
  bool edge(int a, int b) const { return transition[std::size_t(a)][std::size_t(b)] != 0; }
};

// Validates shape, 0/1 entries, and the no-zero-row rule, and computes the
// mixing flag.  Throws ErrKind::validation on malformed input.
MarkovShift make_shift(std::vector<std::vector<int>> transition,
                       std::vector<std::string> labels = {});

// Edge potential r(x0, x1), defined on transition edges.  The optional
// certificate (C, K) asserts that every admissible K-edge path has total
// weight >= C > 0 (the eventual-positivity property a roof function needs);
// K = 0 means no certificate.
struct Potential {
  std::vector<std::vector<double>> r;  // n x n; only edge entries are read
  double C = 0.0;
  int K = 0;
};

// Validates the table (shape, finite entries) and, when K > 0, verifies the
// certificate by min-plus dynamic programming over all K-edge paths.
Potential make_potential(const MarkovShift& s, std::vector<std::vector<double>> r,
                         double C = 0.0, int K = 0);

// Finds the smallest K <= k_max with min-path-weight > 0 and installs the
// certificate (C = that minimum).  Returns false when none exists (e.g. a
// zero-weight cycle), leaving the potential unchanged.
bool find_certificate(const MarkovShift& s, Potential& pot, int k_max = 64);

// Z^d-valued displacement, constant on 1-cylinders: one row per state.
struct Displacement {
  int d = 0;
  std::vector<std::vector<long long>> f;  // n rows, d columns
  long long f_max = 0;                    // max over states of |f|_infinity
};

Displacement make_displacement(const MarkovShift& s,
                               std::vector<std::vector<long long>> f);

// Leading eigendata of the weighted operator (LF)(b) = sum over edges a->b
// of exp(-r(a,b)) F(a): eigenvalue lambda, positive eigenfunction psi
// (L psi = lambda psi), eigenmeasure weights rho (rho(LF) = lambda rho(F)),
// normalized so sum(rho) = 1 and sum(psi*rho) = 1; nu = psi*rho is the
// invariant probability; r_hat = r + log(lambda) is the pressure-normalized
// table with L_{r_hat} psi = psi.
struct GibbsData {
  double lambda = 0.0;
  double pressure = 0.0;  // log(lambda)
  std::vector<double> psi, rho, nu;
  std::vector<std::vector<double>> r_hat;
};

// One application of the transfer operator with edge table r.
std::vector<double> transfer_apply(const MarkovShift& s,
                                   const std::vector<std::vector<double>>& r,
                                   const std::vector<double>& F);

// Perron data of the weighted transfer operator.  Requires a mixing shift
// (throws ErrKind::not_mixing otherwise).
GibbsData leading_triple(const MarkovShift& s, const Potential& pot);

// Leading (maximal-modulus) eigenvalue of the twisted operator with kernel
// exp((-1 + i eta) r_hat(a,b)) * exp(i <theta, f(a)>) on edges a->b.  With a
// pressure-normalized table, lambda(0,0) = 1 and |lambda| <= 1 everywhere.
std::complex<double> twisted_eigenvalue(
    const MarkovShift& s, const std::vector<std::vector<double>>& r_hat,
    const Displacement& f, const std::vector<double>& theta, double eta);

}  // namespace covermix
