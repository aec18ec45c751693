#pragma once

#include <functional>
#include <string>

namespace autosage {

// Times one execution of run(). Production timing wraps a monotonic clock;
// tests inject scripted timers to make scheduling decisions reproducible.
class ProbeTimer {
public:
    virtual ~ProbeTimer() = default;
    virtual double time_once_ms(const std::string& label, const std::function<void()>& run) = 0;
};

// steady_clock around a synchronous call.
class SteadyTimer final : public ProbeTimer {
public:
    double time_once_ms(const std::string& label, const std::function<void()>& run) override;
    static SteadyTimer& instance();
};

struct TimedKernelStats {
    double median_ms = 0.0;   // lower-middle element for even counts
    int completed = 0;        // timed runs finished
    bool capped = false;      // stopped before iters because of cap_ms
    double max_run_ms = 0.0;  // slowest observed run (warm-up included)
    double wall_ms = 0.0;     // total wall time incl. warm-up
    int launches = 0;         // kernel executions incl. warm-up
};

// One untimed warm-up, then up to `iters` timed runs, stopping early once
// cumulative timed time exceeds cap_ms (at least one timed run always
// completes).
TimedKernelStats time_kernel(const std::string& label, const std::function<void()>& run,
                             int iters, double cap_ms, ProbeTimer* timer = nullptr);

} // namespace autosage
