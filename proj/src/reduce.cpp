#include "covermix/reduce.hpp"

#include <cmath>

namespace covermix {

std::vector<std::optional<double>> cusp_points(const GroupPresentation& g) {
  std::vector<std::optional<double>> pts;
  for (const auto& w : g.cusp_words) {
    Moebius p = g.evaluate(w);
    if (p.m.c == 0)
      pts.push_back(std::nullopt);  // fixes infinity
    else
      pts.push_back((p.m.a.get_d() - p.m.d.get_d()) / (2.0 * p.m.c.get_d()));
  }
  return pts;
}

namespace {

// horoball depth proxy at a cusp; invariant under the cusp stabilizer
double depth_at(const std::optional<double>& q, const PointH2& z) {
  if (!q) return z.y;
  double dx = z.x - *q;
  return z.y / (dx * dx + z.y * z.y);
}

}  // namespace

ReducedPoint reduce_point(const GroupPresentation& g, const PointH2& z,
                          const ReduceOptions& opt) {
  require(!g.sides.empty(), ErrKind::validation,
          "presentation has no fundamental polygon");
  require(z.y > 0 && std::isfinite(z.x) && std::isfinite(z.y),
          ErrKind::validation, "point must lie in the upper half-plane");
  auto cusps = cusp_points(g);

  std::vector<MatD> side_map;
  std::vector<Word> side_ret_inv;
  for (const auto& s : g.sides) {
    side_map.push_back(to_matd(g.evaluate(s.ret)));
    side_ret_inv.push_back(s.ret.inverse());
  }

  PointH2 cur = z;
  Word w;
  for (long it = 0; it < opt.max_iter; ++it) {
    for (const auto& q : cusps)
      if (depth_at(q, cur) > opt.height_cutoff)
        fail(ErrKind::cusp_escape, "point escaped into a cusp during reduction");

    int worst = -1;
    double worst_v = opt.slack;
    for (std::size_t i = 0; i < g.sides.size(); ++i) {
      double v = g.sides[i].outward(cur);
      if (v > worst_v) { worst_v = v; worst = int(i); }
    }
    if (worst < 0) return {cur, w, it};
    cur = apply(side_map[worst], cur);
    for (auto l : side_ret_inv[worst].letters()) w.push(l);
  }
  fail(ErrKind::numeric, "reduction did not terminate");
}

}  // namespace covermix
