#pragma once
// Depth-first ball enumeration kernel, shared by the public API (ball.cpp)
// and the conjugacy-class builder.  Walks the freely reduced words of the
// side-pairing group in syllable form: a prefix is abandoned once its
// displacement exceeds radius + margin, and the exponent scan along a fixed
// generator stops at the first abandoned step that is no closer than the one
// before it -- the displacement of m * g^e is convex in e (entries are
// linear combinations of e or of lambda^{+-e}), so nothing smaller follows.
//
// The integer type is a template parameter: CheckedI64 for the fast path,
// mpz_class when entries might not fit (the choice is made up front from a
// worst-case entry bound, so the fast path cannot actually overflow).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "covermix/ball.hpp"

namespace covermix::detail {

struct AbortSignal {};  // cooperative stop used by the parallel driver

template <class T>
struct BallCtx {
  std::vector<Mat2<T>> gen, gen_inv;
  int rank = 0;
  bool origin = true;      // x == y == (0,1): emission uses the exact integers
  PointH2 x{0.0, 1.0}, y{0.0, 1.0};
  double emit_v = 2.0;     // accept when sum_sq < emit_v    (origin path)
  double emit_d = 0.0;     // accept when dist < emit_d      (general path)
  double prune_v = 2.0;    // expand while sum_sq <= prune_v (both paths)
  long long max_steps = 0;
};

inline bool at_origin(const PointH2& z) { return z.x == 0.0 && z.y == 1.0; }

// d(i, g.i) <= d(x, g.y) + d(x,i) + d(y,i), so pruning on the exact integer
// displacement from i stays safe once the threshold absorbs this detour.
inline double base_slack(const BallOptions& opt) {
  if (at_origin(opt.x) && at_origin(opt.y)) return 0.0;
  return dist(opt.x, base_point()) + dist(opt.y, base_point());
}

template <class T>
BallCtx<T> make_ctx(const GroupPresentation& g, double radius,
                    const BallOptions& opt) {
  require(g.rank >= 1 && int(g.gens.size()) == g.rank && g.rank <= 64,
          ErrKind::validation, "enumeration needs 1..64 generators");
  require(std::isfinite(radius) && radius >= 0.0, ErrKind::validation,
          "ball radius must be finite and nonnegative");
  require(std::isfinite(opt.margin) && opt.margin >= 0.0, ErrKind::validation,
          "pruning margin must be finite and nonnegative");
  for (const PointH2* z : {&opt.x, &opt.y})
    require(z->y > 0 && std::isfinite(z->x) && std::isfinite(z->y),
            ErrKind::validation, "base points must lie in the upper half-plane");
  double slack = base_slack(opt);
  require(radius + opt.margin + slack < 600.0, ErrKind::validation,
          "ball radius is out of the supported range");

  BallCtx<T> c;
  c.rank = g.rank;
  for (const auto& m : g.gens) {
    c.gen.push_back(mat_cast<T>(m.m));
    c.gen_inv.push_back(mat_cast<T>(m.m.inverse()));
  }
  c.x = opt.x;
  c.y = opt.y;
  c.origin = (slack == 0.0);
  c.emit_v = 2.0 * std::cosh(radius);
  c.emit_d = radius;
  c.prune_v = 2.0 * std::cosh(radius + opt.margin + slack);
  c.max_steps = opt.max_nodes;
  return c;
}

// Worst-case bound on any value produced while scanning: one extra product
// past a sub-threshold matrix multiplies entries by at most 2*gmax, so all
// intermediate sums of squares stay below 256 * gmax^4 * prune_v.
inline bool fits_i64(const GroupPresentation& g, double radius,
                     const BallOptions& opt) {
  double gmax = 1.0;
  for (const auto& m : g.gens)
    for (const mpz_class* e : {&m.m.a, &m.m.b, &m.m.c, &m.m.d}) {
      if (!e->fits_slong_p()) return false;
      gmax = std::max(gmax, std::abs(e->get_d()));
    }
  double prune_v = 2.0 * std::cosh(radius + opt.margin + base_slack(opt));
  return 256.0 * gmax * gmax * gmax * gmax * prune_v < 9.0e18;
}

inline Moebius to_moebius(const Mat2<CheckedI64>& m) {
  return Moebius(m.a.v, m.b.v, m.c.v, m.d.v);
}
inline Moebius to_moebius(const MatZ& m) { return Moebius(m); }

// visit(letters, mat, dist) when dist(x, m.y) < radius (strict)
template <class T, class Visit>
inline void emit_if_inside(const BallCtx<T>& c, const Mat2<T>& m, double v,
                           const std::vector<Letter>& letters, Visit&& visit) {
  if (c.origin) {
    if (v < c.emit_v) visit(letters, m, std::acosh(std::max(1.0, 0.5 * v)));
    return;
  }
  MatD md{to_double(m.a), to_double(m.b), to_double(m.c), to_double(m.d)};
  double d = dist(c.x, apply(md, c.y));
  if (d < c.emit_d) visit(letters, m, d);
}

template <class T>
struct DfsFrame {
  Mat2<T> m;            // matrix of this node
  std::size_t lbase;    // letter-stack size at this node
  double v0;            // sum_sq of m, anchor for the convex scan
  std::int32_t last;    // generator index of the last syllable, -1 at root
  std::int32_t pair;    // child scan position: 2*gen + (sign < 0)
  std::int64_t e;       // exponents generated so far for the current pair
  Mat2<T> cur;          // m * g^(sign*e), valid once e >= 1
  double prev_v;        // sum_sq at the previous exponent
};

// Explores all strict extensions of `root` (the caller emits root itself).
// `letters` holds root's word and is restored before returning.
// `tick` runs once per generated node and may throw to stop.
template <class T, class Visit, class Tick>
void ball_dfs(const BallCtx<T>& c, const Mat2<T>& root, int root_last,
              std::vector<Letter>& letters, Visit&& visit, Tick&& tick) {
  const int npairs = 2 * c.rank;
  std::vector<DfsFrame<T>> st;
  st.push_back({root, letters.size(), to_double(root.sum_sq()), root_last, 0,
                0, Mat2<T>{}, 0.0});
  while (!st.empty()) {
    DfsFrame<T>& f = st.back();
    if (f.pair >= npairs) {
      letters.resize(f.lbase);
      st.pop_back();
      continue;
    }
    const int gi = f.pair >> 1;
    const int si = (f.pair & 1) ? -1 : 1;
    if (gi == f.last) {  // next syllable must switch generators
      f.pair = 2 * (gi + 1);
      f.e = 0;
      continue;
    }
    const Mat2<T>& step = (si > 0) ? c.gen[gi] : c.gen_inv[gi];
    if (f.e == 0) {
      letters.resize(f.lbase);
      f.cur = f.m * step;
      f.prev_v = f.v0;
    } else {
      f.cur = f.cur * step;
    }
    f.e += 1;
    letters.push_back(Letter{std::int8_t(gi), std::int8_t(si)});
    tick();
    const double v = to_double(f.cur.sum_sq());
    if (v <= c.prune_v) {
      emit_if_inside(c, f.cur, v, letters, visit);
      f.prev_v = v;
      Mat2<T> child = f.cur;  // copy: push_back may invalidate f
      double cv = v;
      std::size_t lb = letters.size();
      st.push_back({std::move(child), lb, cv, gi, 0, 0, Mat2<T>{}, 0.0});
      continue;  // resume this scan at e+1 once the child subtree is done
    }
    if (v < f.prev_v) {  // abandoned but still approaching: keep scanning
      f.prev_v = v;
      continue;
    }
    f.pair += 1;  // past the vertex of the convex scan: next sign/generator
    f.e = 0;
  }
}

// first-level subtree roots, in the exact order the serial scan meets them
template <class T>
struct SubRoot {
  Mat2<T> m;
  std::vector<Letter> prefix;
  int last = 0;
  double v = 0.0;
};

template <class T, class Tick>
std::vector<SubRoot<T>> split_first_level(const BallCtx<T>& c, Tick&& tick) {
  std::vector<SubRoot<T>> subs;
  const Mat2<T> id = Mat2<T>::identity();
  for (int pair = 0; pair < 2 * c.rank; ++pair) {
    const int gi = pair >> 1;
    const int si = (pair & 1) ? -1 : 1;
    const Mat2<T>& step = (si > 0) ? c.gen[gi] : c.gen_inv[gi];
    Mat2<T> cur = id;
    double prev = to_double(id.sum_sq());
    std::vector<Letter> prefix;
    for (;;) {
      cur = cur * step;
      prefix.push_back(Letter{std::int8_t(gi), std::int8_t(si)});
      tick();
      const double v = to_double(cur.sum_sq());
      if (v <= c.prune_v) {
        subs.push_back({cur, prefix, gi, v});
        prev = v;
        continue;
      }
      if (v < prev) {
        prev = v;
        continue;
      }
      break;
    }
  }
  return subs;
}

struct SerialTick {
  long long steps = 0;
  long long cap = 0;
  void operator()() {
    ++steps;
    if (cap > 0 && steps > cap)
      fail(ErrKind::budget_exceeded,
           "enumeration exceeded the node budget of " + std::to_string(cap));
  }
};

// Serial reference driver: tests the identity, then walks the whole tree.
template <class T, class Visit>
void ball_run_serial(const BallCtx<T>& c, Visit&& visit) {
  std::vector<Letter> letters;
  const Mat2<T> id = Mat2<T>::identity();
  emit_if_inside(c, id, to_double(id.sum_sq()), letters, visit);
  SerialTick tick{0, c.max_steps};
  ball_dfs(c, id, -1, letters, visit, tick);
}

struct SharedTick {
  std::atomic<long long>* total = nullptr;
  std::atomic<bool>* stop = nullptr;
  long long cap = 0;
  long long local = 0;
  void operator()() {
    if ((++local & 0x3ff) != 0) return;
    long long t = total->fetch_add(1024, std::memory_order_relaxed) + 1024;
    if (cap > 0 && t > cap) stop->store(true, std::memory_order_relaxed);
    if (stop->load(std::memory_order_relaxed)) throw AbortSignal{};
  }
};

// Parallel driver: tasks cover the identity-rooted first-level subtrees.
// visit(bucket, letters, mat, dist) is called with bucket 0 for the identity
// (before the parallel region) and bucket i+1 for everything in subtree i;
// each bucket is touched by a single task, so per-bucket state needs no
// locking and an in-order merge reproduces the serial stream exactly.
// n_buckets(k) is called once, before any bucket is used.
template <class T, class NBuckets, class Visit>
void ball_run_parallel(const BallCtx<T>& c, NBuckets&& n_buckets,
                       Visit&& visit) {
  SerialTick split_tick{0, c.max_steps};
  auto subs = split_first_level(c, split_tick);

  n_buckets(int(subs.size()) + 1);
  {
    std::vector<Letter> none;
    const Mat2<T> id = Mat2<T>::identity();
    auto vis0 = [&](const std::vector<Letter>& ls, const Mat2<T>& m,
                    double d) { visit(0, ls, m, d); };
    emit_if_inside(c, id, to_double(id.sum_sq()), none, vis0);
  }

  std::atomic<long long> total{split_tick.steps};
  std::atomic<bool> stop{false};
  std::atomic<bool> overflowed{false};
  std::vector<std::string> errs(subs.size());
  std::vector<signed char> errk(subs.size(), -1);

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < long(subs.size()); ++i) {
    if (stop.load(std::memory_order_relaxed)) continue;
    try {
      SharedTick tick{&total, &stop, c.max_steps, 0};
      std::vector<Letter> letters = subs[i].prefix;
      auto vis = [&](const std::vector<Letter>& ls, const Mat2<T>& m,
                     double d) { visit(int(i) + 1, ls, m, d); };
      emit_if_inside(c, subs[i].m, subs[i].v, letters, vis);
      ball_dfs(c, subs[i].m, subs[i].last, letters, vis, tick);
    } catch (const AbortSignal&) {
    } catch (const OverflowSignal&) {
      overflowed.store(true, std::memory_order_relaxed);
      stop.store(true, std::memory_order_relaxed);
    } catch (const Error& e) {
      errk[i] = static_cast<signed char>(e.kind);
      errs[i] = e.what();
      stop.store(true, std::memory_order_relaxed);
    }
  }

  for (std::size_t i = 0; i < subs.size(); ++i)
    if (errk[i] >= 0) fail(static_cast<ErrKind>(errk[i]), errs[i]);
  if (overflowed.load()) throw OverflowSignal{};
  if (c.max_steps > 0 && total.load() > c.max_steps)
    fail(ErrKind::budget_exceeded,
         "enumeration exceeded the node budget of " +
             std::to_string(c.max_steps));
}

}  // namespace covermix::detail
