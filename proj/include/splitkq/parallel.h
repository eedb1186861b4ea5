// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace splitkq {

/// std::thread::hardware_concurrency(), or 1 when unknown.
unsigned default_workers();

/// Runs task(worker, order[i]) for every i in [0, order.size()) on `workers`
/// threads (the caller counts as one). Tasks are claimed dynamically in the
/// sequence given by `order`; an empty `order` means 0, 1, ..., count - 1.
/// The first exception thrown by any task is rethrown after all workers stop.
void run_tasks(std::size_t count, unsigned workers,
               std::span<const std::size_t> order,
               const std::function<void(unsigned worker, std::size_t task)>& task);

}  // namespace splitkq
