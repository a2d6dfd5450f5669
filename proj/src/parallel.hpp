#ifndef QCOV_SRC_PARALLEL_HPP
#define QCOV_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qcov::detail {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Items are
/// claimed from a shared counter; callers write results into per-item slots
/// so the outcome does not depend on scheduling. The first exception escaping
/// fn is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace qcov::detail

#endif  // QCOV_SRC_PARALLEL_HPP
