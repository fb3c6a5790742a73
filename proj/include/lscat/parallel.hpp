#ifndef LSCAT_PARALLEL_HPP
#define LSCAT_PARALLEL_HPP

#include <exception>

#include <Eigen/Core>

namespace lscat {

/// Caps the worker pool; n <= 0 keeps the runtime default.
void set_thread_count(int n);
int thread_count();

/// Runs f(k) for k in [0, n) on the worker pool. Each index is independent, so
/// results do not depend on the thread count. The first exception is rethrown.
template <class F>
void parallel_for(Eigen::Index n, F&& f) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index k = 0; k < n; ++k) {
        try {
            f(k);
        } catch (...) {
#pragma omp critical(lscat_parallel_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace lscat

#endif  // LSCAT_PARALLEL_HPP
