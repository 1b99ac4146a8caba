#include "covermix/cover.hpp"

#include <gmpxx.h>

#include <cmath>
#include <numbers>

#include "covermix/quadrature.hpp"

namespace covermix {
namespace {

// Diagonalizes an integer matrix by unimodular row/column operations (the
// ordering refinement of Smith normal form is not needed: the cokernel is
// trivial iff the diagonal carries `rows` unit entries).
bool surjective_onto_rows(std::vector<std::vector<mpz_class>> m) {
  const int rows = int(m.size());
  if (rows == 0) return true;
  const int cols = int(m[0].size());
  int t = 0;
  for (; t < rows && t < cols; ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      mpz_class best;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j) {
          if (m[i][j] == 0) continue;
          mpz_class av = abs(m[i][j]);
          if (pi < 0 || av < best) {
            pi = i;
            pj = j;
            best = av;
          }
        }
      if (pi < 0) return t >= rows;  // all-zero tail: rank deficient
      std::swap(m[pi], m[t]);
      for (int i = 0; i < rows; ++i) std::swap(m[i][pj], m[i][t]);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        mpz_class q = m[i][t] / m[t][t];  // truncated division is fine here
        for (int j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        mpz_class q = m[t][j] / m[t][t];
        for (int i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (clean) break;  // gcd descent: pivot strictly shrank otherwise
    }
    if (abs(m[t][t]) != 1) return false;  // nontrivial elementary divisor
  }
  return t >= rows;
}

// Exact reduced row echelon form over the rationals; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<mpq_class>>& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = int(m.size()), cols = int(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pi = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        pi = i;
        break;
      }
    if (pi < 0) continue;
    std::swap(m[pi], m[r]);
    mpq_class inv = mpq_class(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Modified Gram-Schmidt onto the span already held in `basis`; returns true
// (and appends) when the residual is numerically nonzero.
bool mgs_append(std::vector<std::vector<double>>& basis,
                std::vector<double> v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      double c = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  double n = std::sqrt(dot(v, v));
  if (n < 1e-9) return false;
  for (double& x : v) x /= n;
  basis.push_back(std::move(v));
  return true;
}

// Cholesky of a symmetric positive-definite matrix; validation error if the
// input fails symmetry or positivity.
std::vector<std::vector<double>> cholesky(
    const std::vector<std::vector<double>>& q) {
  const int n = int(q.size());
  for (int i = 0; i < n; ++i) {
    require(int(q[i].size()) == n, ErrKind::validation,
            "Gram matrix must be square");
    for (int j = 0; j < n; ++j)
      require(std::abs(q[i][j] - q[j][i]) <=
                  1e-12 * (1.0 + std::abs(q[i][j])),
              ErrKind::validation, "Gram matrix must be symmetric");
  }
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = q[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j) {
        require(s > 0.0, ErrKind::validation,
                "Gram matrix must be positive definite");
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  }
  return L;
}

void validate_spec(const CoverSpec& spec, int group_rank) {
  require(spec.d >= 0, ErrKind::validation, "cover dimension must be >= 0");
  require(int(spec.phi.size()) == spec.d, ErrKind::validation,
          "phi must have d rows");
  for (const auto& row : spec.phi) {
    require(int(row.size()) == group_rank, ErrKind::validation,
            "phi must have one column per generator");
    for (long long v : row)
      require(std::llabs(v) <= 1'000'000'000LL, ErrKind::validation,
              "phi entries out of supported range");
  }
  if (spec.d == 0) return;
  std::vector<std::vector<mpz_class>> m(spec.d);
  for (int i = 0; i < spec.d; ++i)
    for (long long v : spec.phi[i]) m[i].push_back(mpz_from_ll(v));
  require(surjective_onto_rows(std::move(m)), ErrKind::not_surjective,
          "phi is not surjective onto Z^d (some elementary divisor is not 1)");
}

std::vector<long long> apply_phi(const CoverSpec& spec,
                                 const std::vector<long long>& ab) {
  std::vector<long long> out(spec.d, 0);
  for (int i = 0; i < spec.d; ++i)
    for (std::size_t j = 0; j < ab.size(); ++j)
      out[i] += spec.phi[i][j] * ab[j];
  return out;
}

// (1/m0) R . Bp^T, the norm matrix in orthonormal E_p coordinates
std::vector<std::vector<double>> norm_matrix(const CoverInvariants& inv) {
  std::vector<std::vector<double>> A;
  for (const auto& row : inv.residue_matrix) {
    std::vector<double> arow(inv.p, 0.0);
    for (int l = 0; l < inv.p; ++l) {
      double s = 0.0;
      for (int i = 0; i < inv.d; ++i)
        s += double(row[i]) * inv.basis_ep[l][i];
      arow[l] = s / inv.m0;
    }
    A.push_back(std::move(arow));
  }
  return A;
}

struct HFactor {
  double value = 1.0;   // pi^{h/2}/sqrt(det Q) * exp(-xi' Q^{-1} xi / 4)
  bool present = true;  // false when h > 0 but no Gram matrix was supplied
};

HFactor h_factor(const CoverInvariants& inv, const std::optional<HGram>& gram,
                 const std::vector<double>& xi_h) {
  if (inv.h == 0) return {1.0, true};
  if (!gram) return {1.0, false};
  require(int(gram->q.size()) == inv.h, ErrKind::validation,
          "Gram matrix size must match h");
  auto L = cholesky(gram->q);
  double det = 1.0;
  for (int i = 0; i < inv.h; ++i) det *= L[i][i] * L[i][i];
  double quad = 0.0;
  if (!xi_h.empty()) {
    // solve Q z = xi via the factorization; quad = xi . z
    std::vector<double> y(inv.h), z(inv.h);
    for (int i = 0; i < inv.h; ++i) {
      double s = xi_h[i];
      for (int k = 0; k < i; ++k) s -= L[i][k] * y[k];
      y[i] = s / L[i][i];
    }
    for (int i = inv.h - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < inv.h; ++k) s -= L[k][i] * z[k];
      z[i] = s / L[i][i];
    }
    quad = dot(xi_h, z);
  }
  double v = std::pow(std::numbers::pi, 0.5 * inv.h) / std::sqrt(det) *
             std::exp(-0.25 * quad);
  return {v, true};
}

}  // namespace

CoverInvariants invariants(const GroupPresentation& g, const CoverSpec& spec) {
  validate_spec(spec, g.rank);
  CoverInvariants inv;
  inv.d = spec.d;
  inv.m0 = area(g);
  require(!g.cusp_words.empty(), ErrKind::validation,
          "presentation must carry cusp words");
  for (const auto& cw : g.cusp_words)
    inv.residue_matrix.push_back(apply_phi(spec, cw.abelianize(g.rank)));

  // exact rank and kernel over the rationals
  std::vector<std::vector<mpq_class>> m;
  for (const auto& row : inv.residue_matrix) {
    std::vector<mpq_class> r;
    for (long long v : row) r.push_back(mpq_class(mpz_from_ll(v)));
    m.push_back(std::move(r));
  }
  std::vector<int> pivots = spec.d == 0 ? std::vector<int>{} : rref(m);
  inv.p = int(pivots.size());
  inv.h = spec.d - inv.p;

  // kernel basis: one vector per free column, from the reduced form
  std::vector<bool> is_pivot(spec.d, false);
  for (int c : pivots) is_pivot[c] = true;
  for (int c = 0; c < spec.d; ++c) {
    if (is_pivot[c]) continue;
    std::vector<double> v(spec.d, 0.0);
    v[c] = 1.0;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m[r][c].get_d();
    bool ok = mgs_append(inv.basis_eh, std::move(v));
    require(ok, ErrKind::numeric, "kernel basis degenerated");
  }
  // E_p = orthogonal complement of the kernel: extend to a full basis
  std::vector<std::vector<double>> full = inv.basis_eh;
  for (int c = 0; c < spec.d && int(full.size()) < spec.d; ++c) {
    std::vector<double> e(spec.d, 0.0);
    e[c] = 1.0;
    if (mgs_append(full, std::move(e))) inv.basis_ep.push_back(full.back());
  }
  require(int(inv.basis_ep.size()) == inv.p, ErrKind::numeric,
          "complement basis construction failed");
  return inv;
}

double p_norm(const CoverInvariants& inv, const std::vector<double>& x) {
  require(int(x.size()) == inv.d, ErrKind::validation,
          "vector dimension must match the cover dimension");
  double s = 0.0;
  for (const auto& row : inv.residue_matrix) {
    double t = 0.0;
    for (int i = 0; i < inv.d; ++i) t += double(row[i]) * x[i];
    s += std::abs(t);
  }
  return s / inv.m0;
}

ConstantC constant_c(const CoverInvariants& inv,
                     const std::optional<HGram>& gram, bool require_exact,
                     double quad_rel_tol) {
  HFactor hf = h_factor(inv, gram, {});
  if (!hf.present && require_exact)
    fail(ErrKind::gram_missing,
         "h > 0: the E_h Gram matrix is required for an exact constant");
  NormIntegral ip = norm_exp_integral(norm_matrix(inv), inv.p, {},
                                      quad_rel_tol);
  ConstantC out;
  out.p_factor = ip.value;
  out.h_factor = hf.value;
  out.rel_error = ip.rel_error;
  double pref = 1.0 / (std::pow(2.0 * std::numbers::pi, inv.d) * inv.m0);
  out.c = pref * ip.value * hf.value;
  out.exact = hf.present && ip.deterministic;
  return out;
}

bool kernel_member(const CoverSpec& spec, const Word& w) {
  if (spec.d == 0) return true;
  const int k = spec.rank();
  for (auto l : w.letters())
    require(l.gen >= 0 && l.gen < k, ErrKind::validation,
            "word uses a generator outside the cover spec");
  auto img = apply_phi(spec, w.abelianize(k));
  for (long long v : img)
    if (v != 0) return false;
  return true;
}

double limit_density(const CoverInvariants& inv,
                     const std::optional<HGram>& gram,
                     const std::vector<double>& xi, double quad_rel_tol) {
  require(int(xi.size()) == inv.d, ErrKind::validation,
          "frequency vector dimension must match the cover dimension");
  std::vector<double> xi_p(inv.p), xi_h(inv.h);
  for (int l = 0; l < inv.p; ++l) xi_p[l] = dot(inv.basis_ep[l], xi);
  for (int l = 0; l < inv.h; ++l) xi_h[l] = dot(inv.basis_eh[l], xi);
  if (inv.h > 0 && !gram)
    fail(ErrKind::gram_missing,
         "h > 0: the E_h Gram matrix is required for the limit density");
  HFactor hf = h_factor(inv, gram, xi_h);
  NormIntegral ip = norm_exp_integral(norm_matrix(inv), inv.p, xi_p,
                                      quad_rel_tol);
  double fp = ip.value / std::pow(2.0 * std::numbers::pi, inv.p);
  double fh = hf.value / std::pow(2.0 * std::numbers::pi, inv.h);
  return fp * fh;
}

}  // namespace covermix
