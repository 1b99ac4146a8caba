#include "covermix/mixing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>

#include "covermix/errors.hpp"

namespace covermix {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_double(std::uint64_t x) {
  return double(x >> 11) * 0x1.0p-53;  // [0, 1)
}

void check_finite_box(const FlowBox& b) {
  require(std::isfinite(b.x1) && std::isfinite(b.x2) && std::isfinite(b.y1) &&
              std::isfinite(b.y2) && std::isfinite(b.theta1) &&
              std::isfinite(b.theta2),
          ErrKind::validation, "flow box fields must be finite");
  require(b.y1 > 0.0, ErrKind::validation,
          "flow box must lie in the upper half plane");
}

// angle arc membership: offset from theta1 reduced into [0, 2 pi)
bool in_arc(const FlowBox& b, double theta) {
  double span = b.theta2 - b.theta1;
  double off = std::fmod(theta - b.theta1, kTwoPi);
  if (off < 0.0) off += kTwoPi;
  return off <= span;
}

// apply the cover map to an abelianized word on a reused buffer
void phi_apply(const CoverSpec& spec, const std::vector<long long>& ab,
               std::vector<long long>& img) {
  img.assign(std::size_t(spec.d), 0);
  for (int j = 0; j < spec.d; ++j) {
    long long acc = 0;
    for (std::size_t k = 0; k < ab.size(); ++k)
      acc += spec.phi[std::size_t(j)][k] * ab[k];
    img[std::size_t(j)] = acc;
  }
}

void abelianize(const Word& w, int rank, std::vector<long long>& ab) {
  ab.assign(std::size_t(rank), 0);
  for (const Letter& l : w.letters()) ab[std::size_t(l.gen)] += l.sign;
}

}  // namespace

double haar_mass(const FlowBox& box) {
  check_finite_box(box);
  double dx = box.x2 - box.x1;
  double dy = 1.0 / box.y1 - 1.0 / box.y2;
  double da = box.theta2 - box.theta1;
  require(dx > 0.0 && dy > 0.0 && da > 0.0, ErrKind::zero_mass,
          "flow box has a degenerate extent");
  return dx * dy * da / kTwoPi;
}

void validate_box(const GroupPresentation& g, const FlowBox& box, int d) {
  haar_mass(box);  // finiteness, ordering, positive mass
  require(box.theta2 - box.theta1 <= kTwoPi + 1e-12, ErrKind::validation,
          "angle arc may not exceed a full turn");
  require(int(box.xi.size()) == d, ErrKind::validation,
          "flow box sheet has the wrong dimension");
  const double slack = 1e-9;
  for (const PolygonSide& s : g.sides) {
    if (s.vertical) {
      double worst = s.inside_sign > 0 ? box.x2 : box.x1;
      require(double(s.inside_sign) * (worst - s.pos) <= slack,
              ErrKind::validation,
              "flow box leaves the fundamental polygon across a vertical side");
    } else if (s.inside_sign > 0) {
      // domain excludes the open disk: nearest rectangle point stays outside
      double xs = std::clamp(s.pos, box.x1, box.x2);
      double dx = xs - s.pos;
      double nearest = std::sqrt(dx * dx + box.y1 * box.y1);
      require(nearest >= s.radius - slack, ErrKind::validation,
              "flow box dips into an excluded disk of the polygon");
    } else {
      // domain inside the disk: farthest corner stays inside
      double dx = std::max(std::fabs(box.x1 - s.pos), std::fabs(box.x2 - s.pos));
      double farthest = std::sqrt(dx * dx + box.y2 * box.y2);
      require(farthest <= s.radius + slack, ErrKind::validation,
              "flow box leaves the bounding disk of the polygon");
    }
  }
}

BoxSample sample_box(const FlowBox& box, std::uint64_t seed,
                     std::uint64_t index) {
  haar_mass(box);
  std::uint64_t h = splitmix64(seed + 0x9e3779b97f4a7c15ull * (index + 1));
  double ux = unit_double(splitmix64(h + 1));
  double uy = unit_double(splitmix64(h + 2));
  double ua = unit_double(splitmix64(h + 3));
  BoxSample out;
  double x = box.x1 + ux * (box.x2 - box.x1);
  // CDF(y) proportional to 1/y1 - 1/y on [y1, y2]
  double y = 1.0 / (1.0 / box.y1 - uy * (1.0 / box.y1 - 1.0 / box.y2));
  double theta = box.theta1 + ua * (box.theta2 - box.theta1);
  out.v = UnitTangent::from_point_angle({x, y}, theta);
  out.xi = box.xi;
  return out;
}

FlowResult flow_and_reduce(const GroupPresentation& g, const CoverSpec& spec,
                           const UnitTangent& v, std::vector<long long> xi,
                           double t, const FlowOptions& opt) {
  require(std::isfinite(t) && t >= 0.0, ErrKind::validation,
          "flow time must be finite and nonnegative");
  require(opt.dt > 0.0, ErrKind::validation, "flow legs must be positive");
  require(int(xi.size()) == spec.d, ErrKind::validation,
          "sheet has the wrong dimension");

  FlowResult out;
  out.v = v;
  out.xi = std::move(xi);
  std::vector<long long> ab, img;
  double remaining = t;
  bool first = true;
  while (remaining > 0.0 || first) {
    double leg = std::min(opt.dt, remaining);
    if (leg > 0.0) out.v = geodesic_flow(out.v, leg);
    remaining -= leg;
    ReducedPoint rp = reduce_point(g, out.v.base_point(), opt.reduce);
    if (rp.steps > 0) {
      out.v.g = to_frame(g.evaluate(rp.w)).inverse() * out.v.g;
      abelianize(rp.w, g.rank, ab);
      phi_apply(spec, ab, img);
      for (int j = 0; j < spec.d; ++j) out.xi[std::size_t(j)] += img[std::size_t(j)];
      out.reductions += rp.steps;
    }
    first = false;
  }
  return out;
}

namespace {

bool box_hit(const FlowBox& a, const FlowResult& r) {
  PointH2 z = r.v.base_point();
  if (z.x < a.x1 || z.x > a.x2 || z.y < a.y1 || z.y > a.y2) return false;
  if (!in_arc(a, r.v.angle())) return false;
  return r.xi == a.xi;
}

}  // namespace

MixingPoint matrix_coefficient(const GroupPresentation& g,
                               const CoverSpec& spec, const FlowBox& boxA,
                               const FlowBox& boxB, double t, long long n,
                               const MixingOptions& opt) {
  validate_box(g, boxA, spec.d);
  validate_box(g, boxB, spec.d);
  require(n >= 1000, ErrKind::validation,
          "correlation estimates need at least 1000 samples");
  require(std::isfinite(t) && t >= 0.0, ErrKind::validation,
          "flow time must be finite and nonnegative");

  const double mass_b = haar_mass(boxB);
  long long hits = 0, discards = 0;
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> stop{false};

  auto body = [&](long long i, long long& local_hits,
                  long long& local_discards) {
    BoxSample s = sample_box(boxB, opt.seed, std::uint64_t(i));
    try {
      FlowResult r = flow_and_reduce(g, spec, s.v, s.xi, t, opt.flow);
      if (box_hit(boxA, r)) ++local_hits;
    } catch (const Error& e) {
      if (e.kind == ErrKind::cusp_escape) {
        ++local_discards;
      } else {
        throw;
      }
    }
  };

  if (opt.parallel) {
#pragma omp parallel
    {
      long long lh = 0, ld = 0;
#pragma omp for schedule(static)
      for (long long i = 0; i < n; ++i) {
        if (stop.load(std::memory_order_relaxed)) continue;
        try {
          body(i, lh, ld);
        } catch (...) {
#pragma omp critical(covermix_mixing_err)
          {
            if (!first_error) first_error = std::current_exception();
            stop.store(true, std::memory_order_relaxed);
          }
        }
      }
#pragma omp critical(covermix_mixing_acc)
      {
        hits += lh;
        discards += ld;
      }
    }
  } else {
    for (long long i = 0; i < n; ++i) body(i, hits, discards);
  }
  if (first_error) std::rethrow_exception(first_error);

  require(double(discards) <= opt.max_discard_fraction * double(n),
          ErrKind::cusp_escape,
          "too many samples escaped into cusps; use boxes in the compact part");
  long long kept = n - discards;
  require(kept >= 2, ErrKind::insufficient_data, "all samples escaped");

  MixingPoint out;
  out.t = t;
  out.samples = kept;
  out.discards = discards;
  double p = double(hits) / double(kept);
  out.estimate = mass_b * p;
  out.stderr_ = mass_b * std::sqrt(p * (1.0 - p) / double(kept - 1));
  return out;
}

MixingSeries matrix_coefficient_series(const GroupPresentation& g,
                                       const CoverSpec& spec,
                                       const FlowBox& boxA,
                                       const FlowBox& boxB,
                                       const std::vector<double>& t_grid,
                                       long long n, const MixingOptions& opt) {
  require(!t_grid.empty(), ErrKind::validation, "the t grid is empty");
  MixingSeries series;
  series.group = g;
  series.spec = spec;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    MixingOptions per = opt;
    per.seed = splitmix64(opt.seed ^ (0xd1b54a32d192ed03ull + i));
    series.points.push_back(
        matrix_coefficient(g, spec, boxA, boxB, t_grid[i], n, per));
  }
  return series;
}

FitReport decay_fit(const MixingSeries& s, double t_lo, double t_hi,
                    const std::vector<double>& alphas) {
  std::vector<double> t, est, se;
  for (const MixingPoint& p : s.points) {
    t.push_back(p.t);
    est.push_back(p.estimate);
    se.push_back(p.stderr_);
  }
  FitReport r = fit_decay_series(t, est, se, t_lo, t_hi, alphas);
  CoverInvariants inv = invariants(s.group, s.spec);
  r.predicted_alpha = double(inv.p) + 0.5 * double(inv.h);
  return r;
}

}  // namespace covermix
