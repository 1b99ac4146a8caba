#include "covermix/qsum.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <tuple>

#include "covermix/errors.hpp"

namespace covermix {

// ---------- step windows ----------

StepWindow make_window(std::vector<StepWindow::Piece> pieces) {
  for (const auto& p : pieces) {
    require(std::isfinite(p.lo) && std::isfinite(p.hi),
            ErrKind::unbounded_window, "window pieces must be bounded");
    require(p.lo <= p.hi, ErrKind::validation,
            "window piece has lo > hi");
    require(std::isfinite(p.height), ErrKind::validation,
            "window heights must be finite");
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const StepWindow::Piece& a, const StepWindow::Piece& b) {
              return a.lo < b.lo;
            });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    bool touch_ok = pieces[i].lo > pieces[i - 1].hi ||
                    (pieces[i].lo == pieces[i - 1].hi &&
                     !(pieces[i].include_lo && pieces[i - 1].include_hi));
    require(touch_ok, ErrKind::validation, "window pieces overlap");
  }
  StepWindow w;
  w.pieces = std::move(pieces);
  return w;
}

StepWindow indicator_window(double lo, double hi, bool include_lo,
                            bool include_hi) {
  return make_window({StepWindow::Piece{lo, hi, 1.0, include_lo, include_hi}});
}

double StepWindow::lo() const {
  return pieces.empty() ? 0.0 : pieces.front().lo;
}
double StepWindow::hi() const {
  return pieces.empty() ? 0.0 : pieces.back().hi;
}

double StepWindow::operator()(double s) const {
  for (const auto& p : pieces) {
    if (s < p.lo || s > p.hi) continue;
    if (s == p.lo && !p.include_lo) continue;
    if (s == p.hi && !p.include_hi) continue;
    return p.height;
  }
  return 0.0;
}

double StepWindow::integral() const {
  double acc = 0.0;
  for (const auto& p : pieces) acc += p.height * (p.hi - p.lo);
  return acc;
}

double window_cross(const StepWindow& u1, const StepWindow& u2, double c) {
  // integral over s of u1(s + c) u2(s): piece I1 shifted left by c meets I2
  double acc = 0.0;
  for (const auto& a : u1.pieces)
    for (const auto& b : u2.pieces) {
      double lo = std::max(a.lo - c, b.lo);
      double hi = std::min(a.hi - c, b.hi);
      if (hi > lo) acc += a.height * b.height * (hi - lo);
    }
  return acc;
}

// ---------- path-sum machinery ----------

namespace {

struct PathBound {
  double tail_min = 0.0;  // lower bound on the weight of any nonempty suffix
  long long n_max = 0;    // largest admissible edge count under the cap
};

// Lower bound on m-edge path weights from the certificate (C, K) plus the
// single-edge minimum: floor(m/K) complete blocks and the remainder.
double path_lb(long long m, double C, int K, double min_edge) {
  return double(m / K) * C + double(m % K) * min_edge;
}

PathBound path_bounds(const MarkovShift& s,
                      const std::vector<std::vector<double>>& r_hat,
                      double r_cap) {
  Potential pot;
  pot.r = r_hat;
  require(find_certificate(s, pot, 64), ErrKind::validation,
          "normalized roof admits no positive path certificate");
  double min_edge = 0.0;
  bool first = true;
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b)
      if (s.edge(a, b)) {
        double v = r_hat[std::size_t(a)][std::size_t(b)];
        min_edge = first ? v : std::min(min_edge, v);
        first = false;
      }
  min_edge = std::min(min_edge, 0.0);  // only negative edges loosen the bound

  PathBound pb;
  // tail_min: minimum of path_lb over all m >= 1.  Beyond K full blocks per
  // unit of |min_edge| slack the bound strictly grows, so a finite scan
  // suffices.
  long long scan = pot.K * (2 + (long long)std::ceil(
                                    (std::fabs(min_edge) * pot.K) / pot.C));
  pb.tail_min = path_lb(1, pot.C, pot.K, min_edge);
  for (long long m = 1; m <= scan; ++m)
    pb.tail_min = std::min(pb.tail_min, path_lb(m, pot.C, pot.K, min_edge));
  // n_max: last m with path_lb(m) <= r_cap; per residue class mod K the
  // bound increases by C each stride, so stop once all classes exceed.
  long long m = 1, last_ok = 0, exceeded_run = 0;
  while (exceeded_run < pot.K) {
    if (path_lb(m, pot.C, pot.K, min_edge) <= r_cap) {
      last_ok = m;
      exceeded_run = 0;
    } else {
      ++exceeded_run;
    }
    ++m;
    require(m < (1LL << 40), ErrKind::validation,
            "window cap admits unreasonably long paths");
  }
  pb.n_max = last_ok;
  return pb;
}

void check_symbolic_args(const MarkovShift& s,
                         const std::vector<std::vector<double>>& r_hat,
                         const Displacement& f, const std::vector<double>& Phi,
                         const std::vector<long long>& xi) {
  require(int(r_hat.size()) == s.n, ErrKind::validation,
          "edge table does not match the shift");
  require(int(f.f.size()) == s.n, ErrKind::validation,
          "displacement does not match the shift");
  require(int(Phi.size()) == s.n, ErrKind::validation,
          "observable must have one value per state");
  require(int(xi.size()) == f.d, ErrKind::validation,
          "displacement class has the wrong dimension");
}

// Open DP node: paths y_0 ... y_{k-1} sharing (last state, accumulated
// displacement, accumulated roof).  The roof is part of the key, so merged
// paths are exactly interchangeable; values sum start weights
// Phi(y_0)*psi(y_0) as exact rationals, making the merge order immaterial.
using OpenKey = std::tuple<int, std::vector<long long>, double>;

// Grouped closed contributions: exact weight sum per distinct total roof.
using Profile = std::map<double, mpq_class>;

// All paths of n >= 0 edges ending at x with displacement sum xi and total
// roof <= r_cap, grouped by total roof.
Profile path_profile(const MarkovShift& s,
                     const std::vector<std::vector<double>>& r_hat,
                     const Displacement& f, const std::vector<double>& psi,
                     const std::vector<double>& Phi, int x,
                     const std::vector<long long>& xi, double r_cap,
                     long long max_nodes) {
  Profile out;
  const bool xi_zero =
      std::all_of(xi.begin(), xi.end(), [](long long v) { return v == 0; });
  if (xi_zero && 0.0 <= r_cap) {
    // n = 0: the path is x itself
    out[0.0] += mpq_class(Phi[std::size_t(x)] * psi[std::size_t(x)]);
  }
  if (r_cap < 0.0) return out;

  PathBound pb = path_bounds(s, r_hat, r_cap);
  long long steps = 0;

  std::map<OpenKey, mpq_class> layer;
  // layer 1: a single placed symbol y_0, no edges yet
  for (int a = 0; a < s.n; ++a) {
    double w = Phi[std::size_t(a)] * psi[std::size_t(a)];
    if (w == 0.0) continue;
    layer[OpenKey{a, f.f[std::size_t(a)], 0.0}] += mpq_class(w);
  }

  for (long long k = 1; k <= pb.n_max && !layer.empty(); ++k) {
    // close: edge (last -> x) completes an n = k path
    for (const auto& [key, val] : layer) {
      const auto& [a, acc, r] = key;
      if (!s.edge(a, x)) continue;
      if (acc != xi) continue;
      double total = r + r_hat[std::size_t(a)][std::size_t(x)];
      if (total <= r_cap) out[total] += val;
    }
    if (k == pb.n_max) break;
    // extend: place symbol y_k, adding edge (y_{k-1} -> y_k) and f(y_k)
    std::map<OpenKey, mpq_class> next;
    for (const auto& [key, val] : layer) {
      const auto& [a, acc, r] = key;
      for (int b = 0; b < s.n; ++b) {
        if (!s.edge(a, b)) continue;
        double r2 = r + r_hat[std::size_t(a)][std::size_t(b)];
        if (r2 + pb.tail_min > r_cap) continue;  // no suffix can finish in cap
        std::vector<long long> acc2 = acc;
        bool reachable = true;
        for (int j = 0; j < f.d; ++j) {
          acc2[std::size_t(j)] += f.f[std::size_t(b)][std::size_t(j)];
          // remaining placements before the last possible close
          long long room = (pb.n_max - (k + 1)) * f.f_max;
          if (std::llabs(xi[std::size_t(j)] - acc2[std::size_t(j)]) > room)
            reachable = false;
        }
        if (!reachable) continue;
        next[OpenKey{b, std::move(acc2), r2}] += val;
        if (max_nodes > 0 && ++steps > max_nodes)
          fail(ErrKind::budget_exceeded,
               "path sum exceeded the node budget");
      }
    }
    layer = std::move(next);
  }
  return out;
}

// Contract a profile against the window: plain left-to-right sum in
// ascending roof order (the documented arithmetic order; oracles mirror it).
double contract(const Profile& prof, const StepWindow& u, double t) {
  double acc = 0.0;
  for (const auto& [r, w] : prof) acc += w.get_d() * std::exp(-r) * u(r - t);
  return acc;
}

}  // namespace

double q_sum(const MarkovShift& s, const std::vector<std::vector<double>>& r_hat,
             const Displacement& f, const std::vector<double>& psi,
             const std::vector<double>& Phi, const StepWindow& u, int x,
             const std::vector<long long>& xi, double t,
             const QSumOptions& opt) {
  check_symbolic_args(s, r_hat, f, Phi, xi);
  require(int(psi.size()) == s.n, ErrKind::validation,
          "psi must have one value per state");
  require(x >= 0 && x < s.n, ErrKind::validation, "state index out of range");
  require(std::isfinite(t), ErrKind::validation, "time must be finite");
  require(!u.pieces.empty(), ErrKind::validation, "window is empty");
  Profile prof =
      path_profile(s, r_hat, f, psi, Phi, x, xi, t + u.hi(), opt.max_nodes);
  return contract(prof, u, t);
}

ItPair i_t(const MarkovShift& s, const std::vector<std::vector<double>>& r_hat,
           const Displacement& f, const GibbsData& gd, double m0,
           const ProductObservable& psi1, const ProductObservable& psi2,
           double t, const QSumOptions& opt) {
  check_symbolic_args(s, r_hat, f, psi1.Phi, psi1.xi);
  check_symbolic_args(s, r_hat, f, psi2.Phi, psi2.xi);
  require(m0 > 0 && std::isfinite(m0), ErrKind::validation,
          "total mass must be positive");
  require(std::isfinite(t), ErrKind::validation, "time must be finite");
  require(!psi1.u.pieces.empty() && !psi2.u.pieces.empty(),
          ErrKind::validation, "window is empty");

  const double prefactor = m0 / mean_roof(s, gd);
  // delta factors force xi = psi2.xi and displacement sum = dxi
  std::vector<long long> dxi(psi1.xi);
  for (int j = 0; j < f.d; ++j) dxi[std::size_t(j)] -= psi2.xi[std::size_t(j)];

  // V(c) = integral u1(s + c) u2(s) ds;  nonzero only for
  // c in [lo1 - hi2, hi1 - lo2], so total roofs r = t - c stay below r_cap.
  const double r_cap = t - psi1.u.lo() + psi2.u.hi();

  ItPair out;

  // --- direct: forward orbit segments a_0 -> ... -> a_n, measure weights
  // nu[a_0...a_n] = psi(a_0) e^{-roof} rho(a_n), exhaustive DFS with the
  // same suffix bound as the DP.
  {
    double acc = 0.0;
    const bool dxi_zero =
        std::all_of(dxi.begin(), dxi.end(), [](long long v) { return v == 0; });
    if (dxi_zero) {
      for (int a = 0; a < s.n; ++a)
        acc += gd.psi[std::size_t(a)] * psi2.Phi[std::size_t(a)] *
               psi1.Phi[std::size_t(a)] * gd.rho[std::size_t(a)] *
               window_cross(psi1.u, psi2.u, t);
    }
    if (r_cap >= 0.0) {
      PathBound pb = path_bounds(s, r_hat, r_cap);
      long long steps = 0;
      std::vector<long long> acc_xi(std::size_t(f.d), 0);
      // iterative DFS over (path end state, depth, roof, displacement)
      struct Frame {
        int state;
        int next;  // next candidate extension state
        double roof;
      };
      for (int a0 = 0; a0 < s.n; ++a0) {
        double start = gd.psi[std::size_t(a0)] * psi2.Phi[std::size_t(a0)];
        if (start == 0.0) continue;
        std::vector<Frame> stack{{a0, 0, 0.0}};
        std::fill(acc_xi.begin(), acc_xi.end(), 0);
        for (int j = 0; j < f.d; ++j)
          acc_xi[std::size_t(j)] = f.f[std::size_t(a0)][std::size_t(j)];
        while (!stack.empty()) {
          Frame& fr = stack.back();
          long long n = (long long)stack.size();  // edges once we extend
          int b = fr.next;
          if (b >= s.n || n > pb.n_max) {
            // unwind
            for (int j = 0; j < f.d; ++j)
              acc_xi[std::size_t(j)] -=
                  f.f[std::size_t(fr.state)][std::size_t(j)];
            stack.pop_back();
            if (!stack.empty()) ++stack.back().next;
            continue;
          }
          if (!s.edge(fr.state, b)) {
            ++fr.next;
            continue;
          }
          double roof2 = fr.roof + r_hat[std::size_t(fr.state)][std::size_t(b)];
          if (roof2 + std::min(pb.tail_min, 0.0) > r_cap) {
            ++fr.next;
            continue;
          }
          if (opt.max_nodes > 0 && ++steps > opt.max_nodes)
            fail(ErrKind::budget_exceeded, "path sum exceeded the node budget");
          // the path a_0 .. b has n edges; displacement counts a_0..a_{n-1}
          bool match = true;
          for (int j = 0; j < f.d; ++j)
            if (acc_xi[std::size_t(j)] != dxi[std::size_t(j)]) {
              match = false;
              break;
            }
          if (match && roof2 <= r_cap)
            acc += start * std::exp(-roof2) * psi1.Phi[std::size_t(b)] *
                   gd.rho[std::size_t(b)] * window_cross(psi1.u, psi2.u, t - roof2);
          // reachability prune for deeper extensions
          bool reachable = true;
          for (int j = 0; j < f.d; ++j) {
            long long a2 = acc_xi[std::size_t(j)] +
                           f.f[std::size_t(b)][std::size_t(j)];
            if (std::llabs(dxi[std::size_t(j)] - a2) >
                (pb.n_max - n) * f.f_max)
              reachable = false;
          }
          if (reachable && n < pb.n_max) {
            for (int j = 0; j < f.d; ++j)
              acc_xi[std::size_t(j)] += f.f[std::size_t(b)][std::size_t(j)];
            stack.push_back({b, 0, roof2});
          } else {
            ++fr.next;
          }
        }
      }
    }
    out.direct = prefactor * acc;
  }

  // --- unfolded: integrate Psi1 against Q_{t-s} in d(rho) --
  {
    double acc = 0.0;
    for (int a = 0; a < s.n; ++a) {
      double coeff = gd.rho[std::size_t(a)] * psi1.Phi[std::size_t(a)];
      if (coeff == 0.0) continue;
      Profile prof = path_profile(s, r_hat, f, gd.psi, psi2.Phi, a, dxi,
                                  r_cap, opt.max_nodes);
      double inner = 0.0;
      for (const auto& [r, w] : prof)
        inner += w.get_d() * std::exp(-r) * window_cross(psi1.u, psi2.u, t - r);
      acc += coeff * inner;
    }
    out.unfolded = prefactor * acc;
  }
  return out;
}

double mean_roof(const MarkovShift& s, const GibbsData& gd) {
  double acc = 0.0;
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b)
      if (s.edge(a, b)) {
        double r = gd.r_hat[std::size_t(a)][std::size_t(b)];
        acc += gd.psi[std::size_t(a)] * std::exp(-r) * gd.rho[std::size_t(b)] * r;
      }
  require(acc > 0.0, ErrKind::validation,
          "the normalized roof has nonpositive mean");
  return acc;
}

LltSeries llt_series(const MarkovShift& s,
                     const std::vector<std::vector<double>>& r_hat,
                     const Displacement& f, const GibbsData& gd,
                     const std::vector<double>& t_grid, int x,
                     const std::vector<long long>& xi,
                     const LltOptions& opt) {
  std::vector<double> one(std::size_t(s.n), 1.0);
  check_symbolic_args(s, r_hat, f, one, xi);
  require(x >= 0 && x < s.n, ErrKind::validation, "state index out of range");
  require(!t_grid.empty(), ErrKind::validation, "the t grid is empty");
  const int d = f.d;

  // aperiodicity scan: |lambda(theta, 0)| must drop below 1 off theta = 0
  if (d > 0) {
    require(opt.theta_grid >= 8, ErrKind::validation,
            "aperiodicity scan needs at least 8 points per dimension");
    std::vector<int> idx(std::size_t(d), 0);
    const double step = 2.0 * M_PI / opt.theta_grid;
    while (true) {
      std::vector<double> theta(std::size_t(d), 0.0);
      bool origin = true;
      for (int j = 0; j < d; ++j) {
        theta[std::size_t(j)] = -M_PI + step * (idx[std::size_t(j)] + 1);
        if (std::fabs(theta[std::size_t(j)]) > 1e-12) origin = false;
      }
      if (!origin) {
        double mod = std::abs(twisted_eigenvalue(s, r_hat, f, theta, 0.0));
        require(mod < 1.0 - 1e-9, ErrKind::periodic_cocycle,
                "displacement cocycle is periodic: |lambda| = 1 off zero");
      }
      int j = 0;
      for (; j < d; ++j) {
        if (++idx[std::size_t(j)] < opt.theta_grid) break;
        idx[std::size_t(j)] = 0;
      }
      if (j == d) break;
    }
  }

  LltSeries out;
  out.r_bar = mean_roof(s, gd);

  // covariance: Sigma_ij = -d^2 log|lambda(theta,0)| / d theta_i d theta_j
  out.sigma.assign(std::size_t(d), std::vector<double>(std::size_t(d), 0.0));
  double det_sigma = 1.0;
  if (d > 0) {
    const double h = opt.fd_step;
    auto g = [&](const std::vector<double>& th) {
      return std::log(std::abs(twisted_eigenvalue(s, r_hat, f, th, 0.0)));
    };
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        std::vector<double> th(std::size_t(d), 0.0);
        double v;
        if (i == j) {
          th[std::size_t(i)] = h;
          double gp = g(th);
          th[std::size_t(i)] = -h;
          double gm = g(th);
          v = -(gp - 2.0 * g(std::vector<double>(std::size_t(d), 0.0)) + gm) /
              (h * h);
        } else {
          auto at = [&](double a, double b) {
            std::vector<double> u(std::size_t(d), 0.0);
            u[std::size_t(i)] = a;
            u[std::size_t(j)] = b;
            return g(u);
          };
          v = -(at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
        }
        out.sigma[std::size_t(i)][std::size_t(j)] = v;
        out.sigma[std::size_t(j)][std::size_t(i)] = v;
      }
    // determinant by Gaussian elimination (d is tiny)
    std::vector<std::vector<double>> m = out.sigma;
    det_sigma = 1.0;
    for (int c = 0; c < d; ++c) {
      int piv = c;
      for (int r2 = c + 1; r2 < d; ++r2)
        if (std::fabs(m[std::size_t(r2)][std::size_t(c)]) >
            std::fabs(m[std::size_t(piv)][std::size_t(c)]))
          piv = r2;
      if (m[std::size_t(piv)][std::size_t(c)] == 0.0) {
        det_sigma = 0.0;
        break;
      }
      if (piv != c) {
        std::swap(m[std::size_t(piv)], m[std::size_t(c)]);
        det_sigma = -det_sigma;
      }
      det_sigma *= m[std::size_t(c)][std::size_t(c)];
      for (int r2 = c + 1; r2 < d; ++r2) {
        double fac = m[std::size_t(r2)][std::size_t(c)] /
                     m[std::size_t(c)][std::size_t(c)];
        for (int c2 = c; c2 < d; ++c2)
          m[std::size_t(r2)][std::size_t(c2)] -=
              fac * m[std::size_t(c)][std::size_t(c2)];
      }
    }
    require(det_sigma > 0.0, ErrKind::numeric,
            "local-limit covariance is singular");
  }

  // window: arithmetic roofs get one lattice cell, others unit width
  double w = 1.0;
  {
    bool arithmetic = true;
    double common = 0.0;
    bool first = true;
    for (int a = 0; a < s.n && arithmetic; ++a)
      for (int b = 0; b < s.n; ++b)
        if (s.edge(a, b)) {
          double v = r_hat[std::size_t(a)][std::size_t(b)];
          if (first) {
            common = v;
            first = false;
          } else if (std::fabs(v - common) > 1e-12) {
            arithmetic = false;
            break;
          }
        }
    if (arithmetic) w = common;
  }
  require(w > 0.0, ErrKind::validation, "degenerate window width");
  out.window_width = w;
  StepWindow u = indicator_window(-w / 2, w / 2, true, false);

  QSumOptions qopt;
  qopt.max_nodes = opt.max_nodes;
  for (double t : t_grid) {
    require(std::isfinite(t) && t > 0.0, ErrKind::validation,
            "the t grid must be positive");
    double q = q_sum(s, r_hat, f, gd.psi, one, u, x, xi, t, qopt);
    out.t.push_back(t);
    out.scaled.push_back(std::pow(t, 0.5 * d) * q);
  }

  out.predicted_limit = std::pow(2.0 * M_PI, -0.5 * d) /
                        std::sqrt(det_sigma) *
                        std::pow(out.r_bar, 0.5 * d - 1.0) * w *
                        gd.psi[std::size_t(x)];
  return out;
}

}  // namespace covermix
