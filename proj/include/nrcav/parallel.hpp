#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nrcav {

enum class Backend { Serial, OpenMP };

/// How a data-parallel kernel is executed. Serial is the reference path the
/// tests compare against; results never depend on the backend or threads.
struct ExecPolicy {
    Backend backend = Backend::OpenMP;
    int threads = 0;                             // 0: NRCAV_THREADS or OpenMP default
    const std::atomic<bool>* cancel = nullptr;   // set to stop outstanding work

    static ExecPolicy serial() { return {Backend::Serial, 1, nullptr}; }
};

/// Thread count from the NRCAV_THREADS environment variable, or 0 if unset
/// or malformed.
int env_thread_count();

/// Calls body(i) for every i in [0, n). Each index writes only its own output
/// slot, so assembly order is the index order under any schedule. The first
/// exception thrown by a body is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t n, const ExecPolicy& policy, Body&& body)
{
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](std::size_t i) {
        if (policy.cancel != nullptr && policy.cancel->load(std::memory_order_relaxed)) {
            return;
        }
        try {
            body(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };

#ifdef _OPENMP
    if (policy.backend == Backend::OpenMP && n > 1) {
        int threads = policy.threads > 0 ? policy.threads : env_thread_count();
        if (threads <= 0) {
            threads = omp_get_max_threads();
        }
        const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (long long i = 0; i < count; ++i) {
            run(static_cast<std::size_t>(i));
        }
    } else
#endif
    {
        for (std::size_t i = 0; i < n; ++i) {
            run(i);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace nrcav
