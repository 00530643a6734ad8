#include "qh/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace qh {

int thread_cap() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("QH_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
    }
  }
  return std::max(1, n);
}

}  // namespace qh
