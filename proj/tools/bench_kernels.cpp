// Timing comparison of the OpenMP diagnostics kernels against their serial
// reference implementations, over chain lengths typical of analysis runs.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qgarch/diagnostics.hpp"

using namespace qgarch;

namespace {

std::vector<double> ar1_series(std::size_t n, double rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  x[0] = normal(rng);
  for (std::size_t t = 1; t < n; ++t) x[t] = rho * x[t - 1] + normal(rng);
  return x;
}

template <class F>
double time_ms(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled\n");
#endif
  std::printf("%-12s %8s %8s | %12s %12s %8s\n", "kernel", "n", "t_max",
              "serial ms", "parallel ms", "speedup");

  for (const auto& [n, t_max] :
       {std::pair<std::size_t, std::size_t>{20000, 2000},
        {100000, 6400},
        {1000000, 1000}}) {
    const auto series = ar1_series(n, 0.9, 7);
    volatile double sink = 0.0;
    const int reps = n >= 1000000 ? 1 : 3;
    const double serial = time_ms(
        [&] { sink = acf_serial(series, t_max).values.back(); }, reps);
    const double parallel =
        time_ms([&] { sink = acf(series, t_max).values.back(); }, reps);
    (void)sink;
    std::printf("%-12s %8zu %8zu | %12.2f %12.2f %8.2fx\n", "acf", n, t_max,
                serial, parallel, serial / parallel);
  }
  return 0;
}
