// SPDX-License-Identifier: Apache-2.0
//! \file parallel.cpp
#include "uvnlos/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace uvnlos
{
namespace
{
std::atomic<unsigned> worker_override{0};
}  // namespace

void set_worker_override(unsigned workers)
{
    worker_override = workers;
}

unsigned worker_count()
{
    if (unsigned const forced = worker_override)
        return forced;
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (char const* env = std::getenv("UVNLOS_THREADS"))
    {
        try
        {
            long const cap = std::stol(env);
            if (cap >= 1)
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        }
        catch (std::exception const&)
        {
        }
    }
    return n;
}

void parallel_for(std::size_t n, std::function<void(std::size_t)> const& body)
{
    unsigned const workers
        = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace uvnlos
