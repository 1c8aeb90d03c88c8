// Serial reference batch vs OpenMP batch on total-degree homotopies.
//
//   bench_tracking [repeats] [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <vector>

#include "lph/start_systems.hpp"

using namespace lph;

namespace {

MultiPoly dense(std::size_t n, int deg, Rng& rng) {
  std::vector<Monomial> terms;
  std::vector<int> e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      terms.push_back({e, Complex(rng.uniform(-1, 1), rng.uniform(-1, 1))});
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
    e[i] = 0;
  };
  rec(0, deg);
  return MultiPoly(n, terms);
}

struct Workload {
  const char* name;
  std::size_t n;
  int degree;
};

template <typename F>
double best_of(int repeats, F&& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool identical(const std::vector<PathResult>& a, const std::vector<PathResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].status != b[i].status || a[i].steps_taken != b[i].steps_taken) return false;
    if (a[i].endpoint.size() != b[i].endpoint.size()) return false;
    if (!a[i].endpoint.empty() &&
        std::memcmp(a[i].endpoint.data(), b[i].endpoint.data(), a[i].endpoint.size() * sizeof(Complex)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  const int threads = argc > 2 ? std::atoi(argv[2]) : 0;
  const Workload workloads[] = {{"n=3 deg=3", 3, 3}, {"n=4 deg=3", 4, 3}, {"n=5 deg=2", 5, 2}};

  std::printf("OpenMP max threads: %d, requested: %d, repeats: %d\n", omp_get_max_threads(), threads, repeats);
  std::printf("%-12s %8s %12s %12s %9s %10s\n", "workload", "paths", "serial [s]", "openmp [s]", "speedup", "identical");
  TrackConfig cfg;
  for (const auto& w : workloads) {
    Rng rng(2024);
    PolySystem F(w.n);
    TotalDegreeStart ts;
    for (std::size_t i = 0; i < w.n; ++i) {
      F.push_back(dense(w.n, w.degree, rng));
      ts.degrees.push_back(w.degree);
      ts.offsets.push_back(rng.unit_complex());
    }
    const HomotopyPair h(ts.system(), F, rng.unit_complex());
    std::vector<PathJob> jobs;
    for (const auto& z0 : total_degree_roots(ts)) jobs.push_back({&h, z0});

    std::vector<PathResult> serial;
    std::vector<PathResult> parallel;
    const double ts_serial = best_of(repeats, [&] { serial = track_batch_serial(jobs, cfg); });
    const double ts_parallel = best_of(repeats, [&] { parallel = track_batch(jobs, cfg, threads); });
    std::printf("%-12s %8zu %12.4f %12.4f %8.2fx %10s\n", w.name, jobs.size(), ts_serial, ts_parallel,
                ts_serial / ts_parallel, identical(serial, parallel) ? "yes" : "NO");
  }
  return 0;
}
