// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace rfscene {

namespace {
std::atomic<int> g_thread_count{0};
}

void set_thread_count(int n) { g_thread_count.store(n < 0 ? 0 : n); }

int thread_count() {
  int n = g_thread_count.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("RFSCENE_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace rfscene
