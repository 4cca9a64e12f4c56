#include "ebsched/kernel/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace ebsched {

namespace {

int initial_workers() {
  if (const char* env = std::getenv("EBSCHED_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

int& workers() {
  static int n = initial_workers();
  return n;
}

}  // namespace

int worker_count() { return workers(); }

void set_worker_count(int n) { workers() = n > 0 ? n : 1; }

}  // namespace ebsched
