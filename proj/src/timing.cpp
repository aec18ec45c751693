#include "autosage/timing.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

namespace autosage {

double SteadyTimer::time_once_ms(const std::string&, const std::function<void()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    run();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

SteadyTimer& SteadyTimer::instance() {
    static SteadyTimer t;
    return t;
}

TimedKernelStats time_kernel(const std::string& label, const std::function<void()>& run,
                             int iters, double cap_ms, ProbeTimer* timer) {
    if (iters < 1) throw std::invalid_argument("time_kernel: iters must be >= 1");
    if (timer == nullptr) timer = &SteadyTimer::instance();

    TimedKernelStats stats;
    const auto wall0 = std::chrono::steady_clock::now();

    {
        // untimed warm-up (still measured for max_run_ms)
        const auto w0 = std::chrono::steady_clock::now();
        run();
        stats.max_run_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - w0)
                               .count();
        stats.launches = 1;
    }

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(iters));
    double total = 0.0;
    for (int k = 0; k < iters; ++k) {
        const double t = timer->time_once_ms(label, run);
        ++stats.launches;
        times.push_back(t);
        total += t;
        stats.max_run_ms = std::max(stats.max_run_ms, t);
        if (total > cap_ms && k + 1 < iters) {
            stats.capped = true;
            break;
        }
    }
    stats.completed = static_cast<int>(times.size());
    std::sort(times.begin(), times.end());
    stats.median_ms = times[(times.size() - 1) / 2];
    stats.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - wall0)
                        .count();
    return stats;
}

} // namespace autosage
