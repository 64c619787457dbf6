#include "lsl/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lsl {

int thread_count() {
  int n = 1;
#ifdef _OPENMP
  n = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("LEVELSET_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < n) n = cap;
  }
  return n;
}

}  // namespace lsl
