// Independent test-side oracles.  Everything here recomputes expected values
// from first principles with algorithms unrelated to the library kernels:
// exhaustive integer-matrix enumeration, classical modular-group
// factorization, closed-form piecewise integrals, exact-rational path sums,
// and big-integer dynamic programming.  The production code is never called.
#pragma once
#include <gmpxx.h>

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "covermix/qsum.hpp"
#include "covermix/shift.hpp"

namespace oracles {

using Quad = std::array<long long, 4>;  // (a,b,c,d), row-major 2x2

// ---- modular-group membership -------------------------------------------

// Character chi: SL(2,Z) -> Z/12 with chi(T)=1, chi(S)=3, computed by
// continued-fraction factorization over S and T.  The commutator subgroup
// of PSL(2,Z) is exactly { m : chi(m) = 0 mod 6 }.
int modular_character(Quad m);

// Level-2 principal congruence condition: a,d odd and b,c even.
bool is_congruence_level2(const Quad& m);

// ---- brute-force orbit balls ---------------------------------------------

// All canonical PSL(2,Z)-representatives (a>0, or a=0 and b>0) with
// det 1, a^2+b^2+c^2+d^2 < 2 cosh(T), filtered by the given membership
// test.  cosh d(i, m.i) = (a^2+b^2+c^2+d^2)/2 makes this a complete
// enumeration of { m in the group : d(i, m.i) < T }.
std::set<Quad> ball_oracle(double T, bool (*member)(const Quad&));

std::set<Quad> ball_oracle_gamma2(double T);  // membership: congruence mod 2
std::set<Quad> ball_oracle_torus(double T);   // membership: chi = 0 mod 6

// Cross-validation variant: collect matrices of every freely reduced word
// of length <= word_cap over the two given generators whose frame distance
// from the origin is < T.  Sufficient caps make this a second complete
// enumeration that never consults the membership character.
std::set<Quad> ball_word_oracle(const std::array<Quad, 2>& gens, double T,
                                int word_cap);

// ---- brute-force conjugacy classes ---------------------------------------

// One oriented hyperbolic conjugacy class of the rank-2 free group on
// `gens`, found by exhaustive necklace enumeration.  `canon` encodes the
// lexicographically least rotation of the cyclically reduced word, one
// byte per letter: code 2*gen + (sign<0), matching Letter::code().
struct OracleClass {
  std::string canon;
  long long trace = 0;  // |trace|
  double length = 0.0;  // 2 arccosh(|trace|/2)
  bool primitive = true;
  std::array<long long, 2> ab{0, 0};  // exponent sums
};

// Every oriented hyperbolic class with translation length <= L_max whose
// cyclic word length is <= word_cap, by exhaustive enumeration of all
// cyclically reduced words.  max_cyclic_len receives the longest surviving
// word, so callers can certify the cap left a comfortable margin.
std::map<std::string, OracleClass> conjugacy_oracle(
    const std::array<Quad, 2>& gens, double L_max, int word_cap,
    int* max_cyclic_len = nullptr);

// Hard-coded preset generator matrices (kept independent of the library).
std::array<Quad, 2> gens_gamma2();
std::array<Quad, 2> gens_torus();

// ---- cover constant ------------------------------------------------------

// Piecewise closed-form value of the unit-scale integral
// over R^2 of exp(-(|x|+|y|+|x+y|)), assembled sector by sector.
double hex_norm_unit_integral();

// The constant for the gamma2 full-homology cover: scale the unit integral
// to residue-norm units (factor (2 pi)^2) and divide by (2 pi)^d * m0 with
// d = 2, m0 = 2 pi.  Equals 3/(4 pi).
double c_oracle_gamma2_homology();

// Rank-1 cover with residues (1,0,-1): closed-form line integral
// of exp(-|x|/pi) divided by (2 pi)^1 * m0.  Equals 1/(2 pi).
double c_oracle_gamma2_rank1();

// ---- symbolic dynamics ---------------------------------------------------

// Naive transfer operator: out[b] = sum over edges a->b of e^{-r[a][b]} F[a].
std::vector<double> transfer_oracle(
    const std::vector<std::vector<int>>& transition,
    const std::vector<std::vector<double>>& r, const std::vector<double>& F);

// Exhaustive path-sum oracle: enumerates every admissible path, accumulates
// the roof in the same forward association as the production sum, groups
// exact-rational weights by the final roof value, and contracts in
// ascending key order.  Bit-identical to the kernel by construction.
double qsum_oracle(const covermix::MarkovShift& s,
                   const std::vector<std::vector<double>>& r_hat,
                   const covermix::Displacement& f,
                   const std::vector<double>& psi,
                   const std::vector<double>& Phi, const covermix::StepWindow& u,
                   int x, const std::vector<long long>& xi, double t,
                   long long depth_cap);

// Number of {-1,0,+1} sequences of length n with zero sum (big-integer DP).
mpz_class central_trinomial(int n);

}  // namespace oracles
