#include "covermix/ball.hpp"

#include "ball_kernel.hpp"

namespace covermix {

namespace {

template <class T>
void stream_serial(const GroupPresentation& g, double radius,
                   const BallVisitor& visit, const BallOptions& opt) {
  auto c = detail::make_ctx<T>(g, radius, opt);
  detail::ball_run_serial(
      c, [&](const std::vector<Letter>& ls, const Mat2<T>& m, double d) {
        visit(Word::from_letters(ls), detail::to_moebius(m), d);
      });
}

template <class T>
std::vector<BallElement> vec_serial(const GroupPresentation& g, double radius,
                                    const BallOptions& opt) {
  auto c = detail::make_ctx<T>(g, radius, opt);
  std::vector<BallElement> out;
  detail::ball_run_serial(
      c, [&](const std::vector<Letter>& ls, const Mat2<T>& m, double d) {
        out.push_back({Word::from_letters(ls), detail::to_moebius(m), d});
      });
  return out;
}

template <class T>
std::vector<BallElement> vec_parallel(const GroupPresentation& g,
                                      double radius, const BallOptions& opt) {
  auto c = detail::make_ctx<T>(g, radius, opt);
  std::vector<std::vector<BallElement>> buckets;
  detail::ball_run_parallel(
      c, [&](int n) { buckets.resize(std::size_t(n)); },
      [&](int b, const std::vector<Letter>& ls, const Mat2<T>& m, double d) {
        buckets[std::size_t(b)].push_back(
            {Word::from_letters(ls), detail::to_moebius(m), d});
      });
  std::size_t total = 0;
  for (const auto& bk : buckets) total += bk.size();
  std::vector<BallElement> out;
  out.reserve(total);
  for (auto& bk : buckets)
    for (auto& e : bk) out.push_back(std::move(e));
  return out;
}

template <class T>
long long cnt_serial(const GroupPresentation& g, double radius,
                     const BallOptions& opt) {
  auto c = detail::make_ctx<T>(g, radius, opt);
  long long n = 0;
  detail::ball_run_serial(
      c, [&](const std::vector<Letter>&, const Mat2<T>&, double) { ++n; });
  return n;
}

template <class T>
long long cnt_parallel(const GroupPresentation& g, double radius,
                       const BallOptions& opt) {
  auto c = detail::make_ctx<T>(g, radius, opt);
  std::vector<long long> buckets;
  detail::ball_run_parallel(
      c, [&](int n) { buckets.assign(std::size_t(n), 0); },
      [&](int b, const std::vector<Letter>&, const Mat2<T>&, double) {
        ++buckets[std::size_t(b)];
      });
  long long n = 0;
  for (long long b : buckets) n += b;
  return n;
}

}  // namespace

void enumerate_ball_serial(const GroupPresentation& g, double radius,
                           const BallVisitor& visit, const BallOptions& opt) {
  if (detail::fits_i64(g, radius, opt)) {
    try {
      stream_serial<CheckedI64>(g, radius, visit, opt);
      return;
    } catch (const OverflowSignal&) {
      fail(ErrKind::overflow,
           "fast-path overflow while streaming; use the collecting API");
    }
  }
  stream_serial<mpz_class>(g, radius, visit, opt);
}

std::vector<BallElement> ball_serial(const GroupPresentation& g, double radius,
                                     const BallOptions& opt) {
  if (detail::fits_i64(g, radius, opt)) {
    try {
      return vec_serial<CheckedI64>(g, radius, opt);
    } catch (const OverflowSignal&) {
    }
  }
  return vec_serial<mpz_class>(g, radius, opt);
}

std::vector<BallElement> ball_parallel(const GroupPresentation& g,
                                       double radius, const BallOptions& opt) {
  if (detail::fits_i64(g, radius, opt)) {
    try {
      return vec_parallel<CheckedI64>(g, radius, opt);
    } catch (const OverflowSignal&) {
    }
  }
  return vec_parallel<mpz_class>(g, radius, opt);
}

long long ball_count_serial(const GroupPresentation& g, double radius,
                            const BallOptions& opt) {
  if (detail::fits_i64(g, radius, opt)) {
    try {
      return cnt_serial<CheckedI64>(g, radius, opt);
    } catch (const OverflowSignal&) {
    }
  }
  return cnt_serial<mpz_class>(g, radius, opt);
}

long long ball_count_parallel(const GroupPresentation& g, double radius,
                              const BallOptions& opt) {
  if (detail::fits_i64(g, radius, opt)) {
    try {
      return cnt_parallel<CheckedI64>(g, radius, opt);
    } catch (const OverflowSignal&) {
    }
  }
  return cnt_parallel<mpz_class>(g, radius, opt);
}

}  // namespace covermix
