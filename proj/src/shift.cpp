#include "covermix/shift.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "covermix/errors.hpp"

namespace covermix {

namespace {

// Primitivity by saturating boolean powers up to the Wielandt exponent
// (n-1)^2 + 1: the matrix is primitive iff that power is strictly positive.
bool primitive(const std::vector<std::vector<int>>& a) {
  const int n = int(a.size());
  if (n == 1) return a[0][0] != 0;
  std::vector<std::vector<int>> p = a, next(std::size_t(n), std::vector<int>(std::size_t(n), 0));
  const long long wielandt = 1LL * (n - 1) * (n - 1) + 1;
  for (long long step = 1; step < wielandt; ++step) {
    bool all = true;
    for (const auto& row : p)
      for (int v : row)
        if (!v) { all = false; break; }
    if (all) return true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int v = 0;
        for (int k = 0; k < n && !v; ++k) v = p[std::size_t(i)][std::size_t(k)] & a[std::size_t(k)][std::size_t(j)];
        next[std::size_t(i)][std::size_t(j)] = v;
      }
    std::swap(p, next);
  }
  for (const auto& row : p)
    for (int v : row)
      if (!v) return false;
  return true;
}

void check_table_shape(const MarkovShift& s,
                       const std::vector<std::vector<double>>& r,
                       const char* what) {
  require(int(r.size()) == s.n, ErrKind::validation,
          std::string(what) + " table must have one row per state");
  for (const auto& row : r) {
    require(int(row.size()) == s.n, ErrKind::validation,
            std::string(what) + " table rows must have one entry per state");
    for (double v : row)
      require(std::isfinite(v), ErrKind::validation,
              std::string(what) + " table entries must be finite");
  }
}

// Minimum total weight over all K-edge admissible paths (min-plus power).
double min_path_weight(const MarkovShift& s,
                       const std::vector<std::vector<double>>& r, int K) {
  const double inf = std::numeric_limits<double>::infinity();
  const int n = s.n;
  // best[a][b] = min weight of a k-edge path a -> b
  std::vector<std::vector<double>> best(std::size_t(n), std::vector<double>(std::size_t(n), inf));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (s.edge(a, b)) best[std::size_t(a)][std::size_t(b)] = r[std::size_t(a)][std::size_t(b)];
  for (int step = 1; step < K; ++step) {
    std::vector<std::vector<double>> next(std::size_t(n), std::vector<double>(std::size_t(n), inf));
    for (int a = 0; a < n; ++a)
      for (int m = 0; m < n; ++m) {
        if (best[std::size_t(a)][std::size_t(m)] == inf) continue;
        for (int b = 0; b < n; ++b)
          if (s.edge(m, b))
            next[std::size_t(a)][std::size_t(b)] =
                std::min(next[std::size_t(a)][std::size_t(b)],
                         best[std::size_t(a)][std::size_t(m)] + r[std::size_t(m)][std::size_t(b)]);
      }
    best = std::move(next);
  }
  double mn = inf;
  for (const auto& row : best)
    for (double v : row) mn = std::min(mn, v);
  return mn;  // inf means no K-edge path exists at all
}

}  // namespace

MarkovShift make_shift(std::vector<std::vector<int>> transition,
                       std::vector<std::string> labels) {
  MarkovShift s;
  s.n = int(transition.size());
  require(s.n >= 1 && s.n <= 4096, ErrKind::validation,
          "shift needs between 1 and 4096 states");
  for (const auto& row : transition) {
    require(int(row.size()) == s.n, ErrKind::validation,
            "transition matrix must be square");
    bool any = false;
    for (int v : row) {
      require(v == 0 || v == 1, ErrKind::validation,
              "transition entries must be 0 or 1");
      any = any || v;
    }
    require(any, ErrKind::validation,
            "every state needs at least one outgoing edge");
  }
  if (labels.empty()) {
    for (int i = 0; i < s.n; ++i) labels.push_back("s" + std::to_string(i));
  }
  require(int(labels.size()) == s.n, ErrKind::validation,
          "label count must match the state count");
  s.labels = std::move(labels);
  s.transition = std::move(transition);
  s.mixing = primitive(s.transition);
  return s;
}

Potential make_potential(const MarkovShift& s, std::vector<std::vector<double>> r,
                         double C, int K) {
  check_table_shape(s, r, "potential");
  Potential pot;
  pot.r = std::move(r);
  if (K > 0) {
    require(C > 0.0, ErrKind::validation,
            "positivity certificate needs C > 0");
    double mn = min_path_weight(s, pot.r, K);
    require(mn >= C, ErrKind::validation,
            "positivity certificate fails: a " + std::to_string(K) +
                "-edge path has weight " + std::to_string(mn) + " < C");
    pot.C = C;
    pot.K = K;
  }
  return pot;
}

bool find_certificate(const MarkovShift& s, Potential& pot, int k_max) {
  for (int K = 1; K <= k_max; ++K) {
    double mn = min_path_weight(s, pot.r, K);
    if (std::isinf(mn)) return false;  // no paths of this length at all
    if (mn > 0.0) {
      pot.C = mn;
      pot.K = K;
      return true;
    }
  }
  return false;
}

Displacement make_displacement(const MarkovShift& s,
                               std::vector<std::vector<long long>> f) {
  Displacement disp;
  require(int(f.size()) == s.n, ErrKind::validation,
          "displacement needs one row per state");
  disp.d = f.empty() ? 0 : int(f[0].size());
  for (const auto& row : f) {
    require(int(row.size()) == disp.d, ErrKind::validation,
            "displacement rows must have equal length");
    for (long long v : row) {
      require(std::llabs(v) <= (1LL << 40), ErrKind::validation,
              "displacement entries out of supported range");
      disp.f_max = std::max(disp.f_max, std::llabs(v));
    }
  }
  disp.f = std::move(f);
  return disp;
}

std::vector<double> transfer_apply(const MarkovShift& s,
                                   const std::vector<std::vector<double>>& r,
                                   const std::vector<double>& F) {
  check_table_shape(s, r, "potential");
  require(int(F.size()) == s.n, ErrKind::validation,
          "function must have one value per state");
  std::vector<double> out(std::size_t(s.n), 0.0);
  for (int b = 0; b < s.n; ++b) {
    double acc = 0.0;
    for (int a = 0; a < s.n; ++a)
      if (s.edge(a, b))
        acc += std::exp(-r[std::size_t(a)][std::size_t(b)]) * F[std::size_t(a)];
    out[std::size_t(b)] = acc;
  }
  return out;
}

GibbsData leading_triple(const MarkovShift& s, const Potential& pot) {
  check_table_shape(s, pot.r, "potential");
  require(s.mixing, ErrKind::not_mixing,
          "leading eigendata needs a topologically mixing shift");
  const int n = s.n;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (s.edge(a, b)) B(a, b) = std::exp(-pot.r[std::size_t(a)][std::size_t(b)]);

  auto perron = [n](const Eigen::MatrixXd& M, double& lambda_out) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    require(es.info() == Eigen::Success, ErrKind::numeric,
            "eigenvalue iteration failed to converge");
    int best = 0;
    double best_mod = -1.0;
    for (int i = 0; i < n; ++i) {
      double m = std::abs(es.eigenvalues()[i]);
      if (m > best_mod) { best_mod = m; best = i; }
    }
    const auto lam = es.eigenvalues()[best];
    require(std::abs(lam.imag()) <= 1e-9 * (1.0 + std::abs(lam)) && lam.real() > 0,
            ErrKind::numeric, "leading eigenvalue is not real positive");
    lambda_out = lam.real();
    Eigen::VectorXcd vc = es.eigenvectors().col(best);
    // Perron vector is real up to a complex phase; rotate the largest entry
    // onto the positive axis.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(vc[i]) > std::abs(vc[imax])) imax = i;
    Eigen::VectorXcd rot = vc / (vc[imax] / std::abs(vc[imax]));
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      require(std::abs(rot[i].imag()) <= 1e-9, ErrKind::numeric,
              "leading eigenvector is not real");
      v[i] = rot[i].real();
      require(v[i] > 0.0, ErrKind::numeric,
              "leading eigenvector is not strictly positive");
    }
    return v;
  };

  double lam_r = 0.0, lam_l = 0.0;
  Eigen::VectorXd rho = perron(B, lam_r);               // B rho = lambda rho
  Eigen::VectorXd psi = perron(B.transpose(), lam_l);   // B^T psi = lambda psi
  require(std::abs(lam_r - lam_l) <= 1e-9 * lam_r, ErrKind::numeric,
          "left/right eigenvalues disagree");

  GibbsData gd;
  gd.lambda = lam_r;
  gd.pressure = std::log(lam_r);
  rho /= rho.sum();
  psi /= psi.dot(rho);
  gd.psi.assign(psi.data(), psi.data() + n);
  gd.rho.assign(rho.data(), rho.data() + n);
  gd.nu.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) gd.nu[std::size_t(i)] = gd.psi[std::size_t(i)] * gd.rho[std::size_t(i)];
  gd.r_hat = pot.r;
  for (auto& row : gd.r_hat)
    for (double& v : row) v += gd.pressure;
  return gd;
}

std::complex<double> twisted_eigenvalue(
    const MarkovShift& s, const std::vector<std::vector<double>>& r_hat,
    const Displacement& f, const std::vector<double>& theta, double eta) {
  check_table_shape(s, r_hat, "potential");
  require(int(f.f.size()) == s.n, ErrKind::validation,
          "displacement does not match the shift");
  require(int(theta.size()) == f.d, ErrKind::validation,
          "frequency vector must have the displacement's dimension");
  require(s.mixing, ErrKind::not_mixing,
          "twisted spectrum needs a topologically mixing shift");
  const int n = s.n;
  const std::complex<double> I(0.0, 1.0);

  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    double phase = 0.0;
    for (int j = 0; j < f.d; ++j)
      phase += theta[std::size_t(j)] * double(f.f[std::size_t(a)][std::size_t(j)]);
    for (int b = 0; b < n; ++b)
      if (s.edge(a, b)) {
        double rv = r_hat[std::size_t(a)][std::size_t(b)];
        B(a, b) = std::exp(std::complex<double>(-rv, eta * rv)) *
                  std::exp(I * phase);
      }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B);
  require(es.info() == Eigen::Success, ErrKind::numeric,
          "eigenvalue iteration failed to converge");
  std::complex<double> best = 0.0;
  for (int i = 0; i < n; ++i)
    if (std::abs(es.eigenvalues()[i]) > std::abs(best)) best = es.eigenvalues()[i];
  return best;
}

}  // namespace covermix
