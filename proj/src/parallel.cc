// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "splitkq/error.h"

namespace splitkq {

unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_tasks(std::size_t count, unsigned workers,
               std::span<const std::size_t> order,
               const std::function<void(unsigned, std::size_t)>& task) {
  if (workers == 0) throw ConfigError("run_tasks: workers must be positive");
  if (!order.empty() && order.size() != count) {
    throw ConfigError("run_tasks: task order must list every task once");
  }
  if (!order.empty()) {
    std::vector<bool> seen(count, false);
    for (std::size_t t : order) {
      if (t >= count || seen[t]) {
        throw ConfigError("run_tasks: task order is not a permutation");
      }
      seen[t] = true;
    }
  }
  if (count == 0) return;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto drain = [&](unsigned worker) {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        task(worker, order.empty() ? i : order[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(workers, count));
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(drain, w);
    drain(0);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace splitkq
