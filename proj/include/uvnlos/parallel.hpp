// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/parallel.hpp
//! Index-parallel loop with a deterministic result layout.
#pragma once

#include <cstddef>
#include <functional>

namespace uvnlos
{
//! Worker threads to use: hardware concurrency, capped by UVNLOS_THREADS,
//! unless an override is active.
unsigned worker_count();

//! Force the worker count regardless of hardware (0 clears the override).
//! Used to check that results do not depend on the thread count.
void set_worker_override(unsigned workers);

//! Call body(i) for every i in [0, n). Iterations are handed out
//! dynamically; callers write results to slot i and reduce afterwards in
//! index order, so the outcome does not depend on the thread count.
//! The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, std::function<void(std::size_t)> const& body);

}  // namespace uvnlos
