#pragma once

#include <cstdlib>
#include <string>
#include <thread>

extern "C" void openblas_set_num_threads(int);

namespace gapbound {

/// Thread cap from GAPBOUND_THREADS, falling back to the machine core count.
inline int resolve_thread_cap() {
  if (const char* env = std::getenv("GAPBOUND_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Applies the cap to the BLAS backend, which carries all heavy parallelism.
inline int apply_thread_cap() {
  int n = resolve_thread_cap();
  openblas_set_num_threads(n);
  return n;
}

}  // namespace gapbound
