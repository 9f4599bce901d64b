// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace finsler {

/// Worker count used when a caller passes 0. Defaults to the hardware concurrency.
std::size_t default_workers() noexcept;
void set_default_workers(std::size_t workers) noexcept;

/// Calls fn(i) for i in [0, count) on up to `workers` threads. fn must write only to
/// slot i of caller-owned output, so results never depend on scheduling. If any call
/// throws, the exception from the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t workers = 0);

}  // namespace finsler
