#include "autosage/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

namespace autosage {

std::size_t default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<std::size_t>(n);
}

namespace {

// Persistent pool of default_workers()-1 helper threads; the caller of
// parallel_for participates as worker 0. One job at a time.
class Pool {
public:
    static Pool& instance() {
        static Pool pool;
        return pool;
    }

    void run(std::size_t n_tasks, std::size_t max_workers,
             const std::function<void(std::size_t)>& fn) {
        if (n_tasks == 0) return;
        if (max_workers == 0) max_workers = default_workers();
        if (max_workers <= 1 || n_tasks == 1 || helpers_.empty()) {
            for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
            return;
        }

        std::unique_lock<std::mutex> job_lock(job_mutex_);
        fn_ = &fn;
        n_tasks_ = n_tasks;
        next_task_.store(0, std::memory_order_relaxed);
        // helpers_[i] acts as worker i+1; caller is worker 0
        std::size_t active_helpers =
            std::min(max_workers - 1, helpers_.size());
        pending_.store(active_helpers, std::memory_order_relaxed);
        {
            std::lock_guard<std::mutex> lk(wake_mutex_);
            active_helpers_ = active_helpers;
            ++generation_;
        }
        wake_cv_.notify_all();

        work();

        std::unique_lock<std::mutex> lk(wake_mutex_);
        done_cv_.wait(lk, [this] {
            return pending_.load(std::memory_order_acquire) == 0;
        });
        fn_ = nullptr;
    }

private:
    Pool() {
        std::size_t n = default_workers();
        for (std::size_t i = 1; i < n; ++i) {
            helpers_.emplace_back([this, i] { helper_loop(i); });
        }
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(wake_mutex_);
            stop_ = true;
            ++generation_;
        }
        wake_cv_.notify_all();
        for (auto& t : helpers_) t.join();
    }

    void helper_loop(std::size_t worker_id) {
        std::uint64_t seen = 0;
        for (;;) {
            std::size_t helper_slot = worker_id - 1;
            bool participate = false;
            {
                std::unique_lock<std::mutex> lk(wake_mutex_);
                wake_cv_.wait(lk, [&] { return generation_ != seen; });
                seen = generation_;
                if (stop_) return;
                participate = helper_slot < active_helpers_;
            }
            if (!participate) continue;
            work();
            if (pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
                std::lock_guard<std::mutex> lk(wake_mutex_);
                done_cv_.notify_all();
            }
        }
    }

    void work() {
        const auto* fn = fn_;
        const std::size_t n = n_tasks_;
        for (;;) {
            std::size_t t = next_task_.fetch_add(1, std::memory_order_relaxed);
            if (t >= n) break;
            (*fn)(t);
        }
    }

    std::vector<std::thread> helpers_;
    std::mutex job_mutex_;

    std::mutex wake_mutex_;
    std::condition_variable wake_cv_;
    std::condition_variable done_cv_;
    std::uint64_t generation_ = 0;
    std::size_t active_helpers_ = 0;
    bool stop_ = false;

    const std::function<void(std::size_t)>* fn_ = nullptr;
    std::size_t n_tasks_ = 0;
    std::atomic<std::size_t> next_task_{0};
    std::atomic<std::size_t> pending_{0};
};

} // namespace

void parallel_for(std::size_t n_tasks, std::size_t max_workers,
                  const std::function<void(std::size_t)>& fn) {
    Pool::instance().run(n_tasks, max_workers, fn);
}

} // namespace autosage
