#include "covermix/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>

#include "ball_kernel.hpp"

namespace covermix {
namespace {

// Largest integer trace whose translation length stays within max_len, using
// the same double-precision arccosh that the reported lengths use, so the
// trace filter and the stated bound agree exactly.  Values below 3 mean no
// hyperbolic class qualifies.
long long trace_cap(double max_len) {
  auto len = [](long long t) { return 2.0 * std::acosh(0.5 * double(t)); };
  long long n = (long long)std::floor(2.0 * std::cosh(0.5 * max_len));
  while (len(n + 1) <= max_len) ++n;
  while (n >= 3 && len(n) > max_len) --n;
  return n;
}

// |trace| of m when hyperbolic and within cap, else nullopt-like false.
bool trace_in_range(const Mat2<CheckedI64>& m, long long cap, mpz_class& out) {
  long long t = to_ll(m.trace());
  if (t < 0) t = -t;
  if (t <= 2 || t > cap) return false;
  out = mpz_from_ll(t);
  return true;
}
bool trace_in_range(const MatZ& m, long long cap, mpz_class& out) {
  mpz_class t = m.trace();
  if (t < 0) t = -t;
  if (t <= 2 || cmp(t, static_cast<long>(cap)) > 0) return false;
  out = std::move(t);
  return true;
}

// Filters ball elements down to hyperbolic ones within the trace cap,
// canonicalizes each survivor to its necklace on reused scratch buffers, and
// forwards every class exactly once.  Scratch reuse matters: the ball can
// visit many conjugates of the same few classes.
struct ClassDedup {
  long long cap = 2;
  const ConjVisitor* visit = nullptr;
  std::unordered_set<std::string> seen;
  std::vector<Letter> buf;
  std::string key;
  mpz_class tr;

  template <class T>
  void take(const std::vector<Letter>& ls, const Mat2<T>& m) {
    if (!trace_in_range(m, cap, tr)) return;
    // cyclic reduction: strip matching conjugation shells u ... u^{-1}
    std::size_t i = 0, j = ls.size();
    while (j - i >= 2 && ls[i] == ls[j - 1].inverse()) { ++i; --j; }
    buf.assign(ls.begin() + i, ls.begin() + j);
    const std::size_t n = buf.size();
    const std::size_t k = least_rotation_index(buf);
    key.clear();
    for (std::size_t q = 0; q < n; ++q)
      key.push_back(char(buf[(k + q) % n].code()));
    if (!seen.insert(key).second) return;
    std::rotate(buf.begin(), buf.begin() + std::ptrdiff_t(k), buf.end());
    double length = 2.0 * std::acosh(0.5 * tr.get_d());
    (*visit)(buf, tr, length, is_primitive(buf));
  }
};

template <class T>
void run_typed(const GroupPresentation& g, double max_len,
               const ConjOptions& opt, long long cap,
               const ConjVisitor& visit) {
  BallOptions bopt;
  bopt.margin = opt.prune_margin;
  bopt.max_nodes = opt.max_nodes;
  auto c = detail::make_ctx<T>(g, max_len + opt.search_margin, bopt);
  ClassDedup dd;
  dd.cap = cap;
  dd.visit = &visit;
  detail::ball_run_serial(
      c, [&](const std::vector<Letter>& ls, const Mat2<T>& m, double) {
        dd.take(ls, m);
      });
}

void validate(double max_len, const ConjOptions& opt) {
  require(std::isfinite(max_len) && max_len >= 0.0 && max_len <= 80.0,
          ErrKind::validation,
          "translation-length bound must lie in [0, 80]");
  require(std::isfinite(opt.search_margin) && opt.search_margin >= 0.0,
          ErrKind::validation, "search margin must be finite and nonnegative");
}

}  // namespace

void enumerate_conjugacy_stream(const GroupPresentation& g, double max_len,
                                const ConjOptions& opt,
                                const ConjVisitor& visit) {
  validate(max_len, opt);
  long long cap = trace_cap(max_len);
  BallOptions probe;
  probe.margin = opt.prune_margin;
  if (detail::fits_i64(g, max_len + opt.search_margin, probe)) {
    try {
      run_typed<CheckedI64>(g, max_len, opt, cap, visit);
      return;
    } catch (const OverflowSignal&) {
      // cannot restart a stream that already emitted classes
      fail(ErrKind::overflow,
           "fast-path overflow while streaming; use the collecting API");
    }
  }
  run_typed<mpz_class>(g, max_len, opt, cap, visit);
}

std::vector<ConjClass> enumerate_conjugacy_classes(const GroupPresentation& g,
                                                   double max_len,
                                                   const ConjOptions& opt) {
  validate(max_len, opt);
  long long cap = trace_cap(max_len);

  std::vector<ConjClass> out;
  std::vector<std::string> keys;
  ConjVisitor collect = [&](const std::vector<Letter>& ls, const mpz_class& tr,
                            double length, bool primitive) {
    Word w = Word::from_letters(ls);
    keys.push_back(w.key());
    out.push_back(ConjClass{std::move(w), tr, length, primitive});
  };

  BallOptions probe;
  probe.margin = opt.prune_margin;
  bool done = false;
  if (detail::fits_i64(g, max_len + opt.search_margin, probe)) {
    try {
      run_typed<CheckedI64>(g, max_len, opt, cap, collect);
      done = true;
    } catch (const OverflowSignal&) {
      out.clear();
      keys.clear();
    }
  }
  if (!done) run_typed<mpz_class>(g, max_len, opt, cap, collect);

  std::vector<std::size_t> idx(out.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t u, std::size_t v) {
    if (out[u].length != out[v].length) return out[u].length < out[v].length;
    return keys[u] < keys[v];
  });
  std::vector<ConjClass> sorted;
  sorted.reserve(out.size());
  for (std::size_t q : idx) sorted.push_back(std::move(out[q]));
  return sorted;
}

}  // namespace covermix
