// Benchmark harness comparing the OpenMP kernels against their serial
// reference implementations.  Both variants must produce identical results;
// the harness verifies that and reports wall-clock times.
//
// Usage: bench_kernels [--radius R] [--samples N] [--threads K]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "covermix/ball.hpp"
#include "covermix/counting.hpp"
#include "covermix/cover.hpp"
#include "covermix/mixing.hpp"
#include "covermix/presentation.hpp"

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

struct Row {
  std::string name;
  double serial_s = 0.0;
  double parallel_s = 0.0;
  bool match = false;
  std::string detail;
};

void print_table(const std::vector<Row>& rows) {
  std::printf("\n%-26s %12s %12s %9s %7s  %s\n", "kernel", "serial [s]",
              "parallel [s]", "speedup", "match", "result");
  std::printf("%-26s %12s %12s %9s %7s  %s\n", "--------------------------",
              "----------", "----------", "-------", "-----", "------");
  for (const auto& r : rows) {
    double speedup = r.parallel_s > 0.0 ? r.serial_s / r.parallel_s : 0.0;
    std::printf("%-26s %12.3f %12.3f %8.2fx %7s  %s\n", r.name.c_str(),
                r.serial_s, r.parallel_s, speedup, r.match ? "yes" : "NO",
                r.detail.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  double radius = 12.0;
  long long samples = 200000;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--radius") == 0 && i + 1 < argc) {
      radius = std::atof(argv[++i]);
    } else if (std::strcmp(argv[i], "--samples") == 0 && i + 1 < argc) {
      samples = std::atoll(argv[++i]);
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      omp_set_num_threads(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", argv[i]);
      return 2;
    }
  }

  const auto g = covermix::preset_gamma2();
  std::printf("threads: %d   ball radius: %g   mc samples: %lld\n",
              omp_get_max_threads(), radius, samples);
  std::vector<Row> rows;
  bool all_match = true;

  {
    Row r;
    r.name = "ball enumeration";
    double t0 = now_seconds();
    long long ns = covermix::ball_count_serial(g, radius);
    double t1 = now_seconds();
    long long np = covermix::ball_count_parallel(g, radius);
    double t2 = now_seconds();
    r.serial_s = t1 - t0;
    r.parallel_s = t2 - t1;
    r.match = (ns == np);
    r.detail = "count " + std::to_string(ns);
    all_match = all_match && r.match;
    rows.push_back(r);
  }

  {
    Row r;
    r.name = "kernel orbit counting";
    covermix::CoverSpec spec;
    spec.d = 1;
    spec.phi = {{1, 0}};
    std::vector<double> grid;
    for (double T = radius - 3.0; T <= radius + 1e-9; T += 1.0)
      grid.push_back(T);
    covermix::CountOptions opt;
    opt.parallel = false;
    double t0 = now_seconds();
    auto ss = covermix::orbit_count(g, spec, {0.0, 1.0}, {0.0, 1.0}, grid,
                                    opt);
    double t1 = now_seconds();
    opt.parallel = true;
    auto sp = covermix::orbit_count(g, spec, {0.0, 1.0}, {0.0, 1.0}, grid,
                                    opt);
    double t2 = now_seconds();
    r.serial_s = t1 - t0;
    r.parallel_s = t2 - t1;
    r.match = (ss.N == sp.N);
    r.detail = "N(" + std::to_string(grid.back()).substr(0, 4) + ") = " +
               std::to_string(ss.N.back());
    all_match = all_match && r.match;
    rows.push_back(r);
  }

  {
    Row r;
    r.name = "flow-box correlation";
    covermix::CoverSpec spec;
    spec.d = 1;
    spec.phi = {{1, 0}};
    covermix::FlowBox A;
    A.x1 = -0.15;
    A.x2 = 0.15;
    A.y1 = 0.9;
    A.y2 = 1.2;
    A.theta1 = -3.141592653589793;
    A.theta2 = 3.141592653589793;
    A.xi = {0};
    covermix::FlowBox B = A;
    B.y1 = 0.7;
    B.y2 = 0.9;
    covermix::MixingOptions opt;
    opt.seed = 2024;
    opt.parallel = false;
    double t0 = now_seconds();
    auto ms = covermix::matrix_coefficient(g, spec, A, B, 4.0, samples, opt);
    double t1 = now_seconds();
    opt.parallel = true;
    auto mp = covermix::matrix_coefficient(g, spec, A, B, 4.0, samples, opt);
    double t2 = now_seconds();
    r.serial_s = t1 - t0;
    r.parallel_s = t2 - t1;
    r.match = (ms.estimate == mp.estimate) && (ms.discards == mp.discards);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "estimate %.6g", ms.estimate);
    r.detail = buf;
    all_match = all_match && r.match;
    rows.push_back(r);
  }

  print_table(rows);
  if (!all_match) {
    std::fprintf(stderr, "\nFAIL: parallel kernel diverged from serial "
                         "reference\n");
    return 1;
  }
  std::printf("\nall parallel kernels match their serial references\n");
  return 0;
}
