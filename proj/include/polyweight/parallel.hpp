#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>
#include <string>

namespace polyweight {

/// Effective parallel width: min(OMP max threads, POLYWEIGHT_THREADS).
/// All parallel loops in the library write per-item results into
/// preallocated slots and reduce serially in item order, so results are
/// byte-identical for every thread count.
inline int max_threads() {
  static const int cap = [] {
    int hw = 1;
#ifdef _OPENMP
    hw = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("POLYWEIGHT_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1 && v < hw) hw = v;
    }
    return hw;
  }();
  return cap;
}

}  // namespace polyweight
