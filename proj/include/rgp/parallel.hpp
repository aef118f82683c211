#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rgp {

// Execution policy for the data-parallel kernels. Every kernel that accepts
// an Exec produces bit-identical output for both values: loop iterations are
// independent and reductions are merged in index order.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <typename F>
void par_for(Exec mode, int n, F&& body) {
#ifdef _OPENMP
  if (mode == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)mode;
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace rgp
