// Benchmarks the deterministic parallel loop against its serial reference
// on a representative workload: pairwise distances on a glued space.

#include <chrono>
#include <cmath>
#include <iostream>
#include <vector>

#include "lengthlab/catalog.hpp"
#include "lengthlab/geodesic.hpp"
#include "lengthlab/parallel.hpp"

using namespace lengthlab;
using clk = std::chrono::steady_clock;

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 64;
  auto X = catalog::build_tetra_bisphere();
  Rng rng(1234);
  std::vector<SpacePoint> ps, qs;
  for (int i = 0; i < n; ++i) {
    ps.push_back(X->sample_point(rng));
    qs.push_back(X->sample_point(rng));
  }

  std::vector<double> serial(n), parallel(n);

  auto t0 = clk::now();
  par::serial_for(n, [&](size_t i) { serial[i] = distance(*X, ps[i], qs[i]).d; });
  auto t1 = clk::now();
  par::parallel_for(n,
                    [&](size_t i) { parallel[i] = distance(*X, ps[i], qs[i]).d; });
  auto t2 = clk::now();

  double mismatch = 0;
  for (int i = 0; i < n; ++i)
    mismatch = std::max(mismatch, std::fabs(serial[i] - parallel[i]));

  auto ms = [](clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  double ts = ms(t0, t1), tp = ms(t1, t2);
  std::cout << "pairs: " << n << "\n"
            << "threads: " << par::max_threads() << "\n"
            << "serial:   " << ts << " ms\n"
            << "parallel: " << tp << " ms\n"
            << "speedup:  " << (tp > 0 ? ts / tp : 0) << "x\n"
            << "max |serial - parallel|: " << mismatch << "\n";
  return mismatch == 0 ? 0 : 1;
}
