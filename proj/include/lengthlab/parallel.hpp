#ifndef LENGTHLAB_PARALLEL_HPP
#define LENGTHLAB_PARALLEL_HPP

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lengthlab::par {

// Thread cap: min(omp_get_max_threads(), LENGTHLAB_THREADS) when the env
// var is set.
int max_threads();

// OpenMP-parallel loop over [0, n). The body must write only to slots
// indexed by i so results are deterministic regardless of scheduling.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
  const int nt = max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
    f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

// Serial reference with identical semantics; kept for testing and the
// parallel-vs-serial benchmark.
template <class F>
void serial_for(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace lengthlab::par

#endif
