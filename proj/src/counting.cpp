#include "covermix/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ball_kernel.hpp"
#include "covermix/conjugacy.hpp"
#include "covermix/errors.hpp"

namespace covermix {

using detail::BallCtx;
using detail::ball_run_parallel;
using detail::ball_run_serial;
using detail::fits_i64;
using detail::make_ctx;

namespace {

void validate_grid(const std::vector<double>& T) {
  require(!T.empty(), ErrKind::validation, "the T grid is empty");
  for (std::size_t i = 0; i < T.size(); ++i) {
    require(std::isfinite(T[i]), ErrKind::validation,
            "the T grid must be finite");
    require(i == 0 || T[i - 1] < T[i], ErrKind::validation,
            "the T grid must be strictly increasing");
  }
}

// phi . abelianize(letters) == 0, allocation-free (acc is reused scratch).
bool in_kernel(const std::vector<std::vector<long long>>& phi,
               const std::vector<Letter>& ls, std::vector<long long>& acc) {
  std::fill(acc.begin(), acc.end(), 0);
  for (const Letter& l : ls) acc[l.gen] += l.sign;
  for (const auto& row : phi) {
    long long s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * acc[j];
    if (s != 0) return false;
  }
  return true;
}

// Cumulative counts from per-grid-point increment buckets.
std::vector<long long> accumulate_buckets(std::vector<long long> buckets) {
  for (std::size_t i = 1; i < buckets.size(); ++i) buckets[i] += buckets[i - 1];
  return buckets;
}

template <class T>
std::vector<long long> orbit_buckets(const GroupPresentation& g,
                                     const std::vector<double>& grid,
                                     const BallOptions& bopt,
                                     const std::vector<std::vector<long long>>& phi,
                                     bool parallel) {
  BallCtx<T> ctx = make_ctx<T>(g, grid.back(), bopt);
  if (!parallel) {
    std::vector<long long> buckets(grid.size(), 0);
    std::vector<long long> acc(g.rank, 0);
    ball_run_serial(ctx, [&](const std::vector<Letter>& ls, const Mat2<T>&,
                             double d) {
      if (!in_kernel(phi, ls, acc)) return;
      auto it = std::upper_bound(grid.begin(), grid.end(), d);
      if (it != grid.end()) ++buckets[std::size_t(it - grid.begin())];
    });
    return buckets;
  }
  // One bucket array per first-level subtree; integer sums make the merge
  // order irrelevant, so the result matches the serial pass exactly.
  std::vector<std::vector<long long>> parts;
  std::vector<std::vector<long long>> accs;
  ball_run_parallel(
      ctx,
      [&](int n) {
        parts.assign(std::size_t(n), std::vector<long long>(grid.size(), 0));
        accs.assign(std::size_t(n), std::vector<long long>(g.rank, 0));
      },
      [&](int part, const std::vector<Letter>& ls, const Mat2<T>&, double d) {
        if (!in_kernel(phi, ls, accs[std::size_t(part)])) return;
        auto it = std::upper_bound(grid.begin(), grid.end(), d);
        if (it != grid.end())
          ++parts[std::size_t(part)][std::size_t(it - grid.begin())];
      });
  std::vector<long long> buckets(grid.size(), 0);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < buckets.size(); ++i) buckets[i] += p[i];
  return buckets;
}

}  // namespace

CountSeries orbit_count(const GroupPresentation& g, const CoverSpec& spec,
                        PointH2 x, PointH2 y,
                        const std::vector<double>& T_grid,
                        const CountOptions& opt) {
  validate_grid(T_grid);
  invariants(g, spec);  // full spec validation (column count, surjectivity)

  BallOptions bopt;
  bopt.margin = opt.margin;
  bopt.x = x;
  bopt.y = y;
  bopt.max_nodes = opt.max_nodes;

  std::vector<long long> buckets;
  if (fits_i64(g, T_grid.back(), bopt))
    buckets = orbit_buckets<CheckedI64>(g, T_grid, bopt, spec.phi, opt.parallel);
  else
    buckets = orbit_buckets<mpz_class>(g, T_grid, bopt, spec.phi, opt.parallel);

  CountSeries s;
  s.kind = CountKind::orbit;
  s.T = T_grid;
  s.N = accumulate_buckets(std::move(buckets));
  s.group = g;
  s.spec = spec;
  s.x = x;
  s.y = y;
  return s;
}

CountSeries geodesic_count(const GroupPresentation& g, const CoverSpec& spec,
                           const std::vector<long long>& xi,
                           const std::vector<double>& T_grid,
                           const CountOptions& opt) {
  validate_grid(T_grid);
  invariants(g, spec);
  require(int(xi.size()) == spec.d, ErrKind::validation,
          "homology class length must match the cover dimension");

  ConjOptions copt;
  copt.max_nodes = opt.max_nodes;

  std::vector<long long> buckets(T_grid.size(), 0);
  std::vector<long long> acc(g.rank, 0), img(std::size_t(spec.d), 0);
  enumerate_conjugacy_stream(
      g, T_grid.back(), copt,
      [&](const std::vector<Letter>& ls, const mpz_class&, double len,
          bool primitive) {
        if (!primitive) return;
        std::fill(acc.begin(), acc.end(), 0);
        for (const Letter& l : ls) acc[l.gen] += l.sign;
        for (int i = 0; i < spec.d; ++i) {
          long long s = 0;
          for (std::size_t j = 0; j < spec.phi[std::size_t(i)].size(); ++j)
            s += spec.phi[std::size_t(i)][j] * acc[j];
          img[std::size_t(i)] = s;
        }
        if (!std::equal(img.begin(), img.end(), xi.begin())) return;
        // closed inequality: first grid point with T_i >= len
        auto it = std::lower_bound(T_grid.begin(), T_grid.end(), len);
        if (it != T_grid.end()) ++buckets[std::size_t(it - T_grid.begin())];
      });

  CountSeries s;
  s.kind = CountKind::geodesic;
  s.T = T_grid;
  s.N = accumulate_buckets(std::move(buckets));
  s.group = g;
  s.spec = spec;
  s.xi = xi;
  return s;
}

FitReport fit_exponent(const CountSeries& s, double t_lo, double t_hi,
                       const std::vector<double>& alphas) {
  FitReport rep = fit_exponent_series(s.T, s.N, t_lo, t_hi, alphas);
  CoverInvariants inv = invariants(s.group, s.spec);
  rep.predicted_alpha = inv.p + 0.5 * inv.h;
  if (s.kind == CountKind::geodesic) rep.predicted_alpha += 1.0;
  return rep;
}

}  // namespace covermix
