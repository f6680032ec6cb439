#include "lengthlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace lengthlab::par {

int max_threads() {
#ifdef _OPENMP
  int nt = omp_get_max_threads();
#else
  int nt = 1;
#endif
  if (const char* env = std::getenv("LENGTHLAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) nt = std::min(nt, cap);
  }
  return nt;
}

}  // namespace lengthlab::par
