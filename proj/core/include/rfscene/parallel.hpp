// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Minimal fork-join helper. Every parallel loop in the toolkit writes each
// index's result to its own slot (or merges partial buffers in a fixed
// order), so results are bit-identical for any thread count.

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace rfscene {

// 0 means "not set": fall back to RFSCENE_THREADS, then hardware concurrency.
void set_thread_count(int n);
int thread_count();

namespace detail {

template <typename Fn>
void run_chunked(std::size_t begin, std::size_t end, int threads, Fn& fn) {
  const std::size_t n = end - begin;
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + n * w / workers;
    const std::size_t hi = begin + n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Calls fn(i) for i in [begin, end) across the configured thread count.
// fn must not write shared state except through per-index slots.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn fn) {
  detail::run_chunked(begin, end, thread_count(), fn);
}

}  // namespace rfscene
