#pragma once

#include "autosage/cache.hpp"
#include "autosage/cost.hpp"
#include "autosage/csr.hpp"
#include "autosage/device.hpp"
#include "autosage/kernels.hpp"
#include "autosage/timing.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace autosage {

struct ProbeConfig {
    double frac = 0.02;        // sample fraction of rows
    std::size_t min_rows = 512;
    int iters = 5;             // timed probe iterations (1 extra warm-up)
    double cap_ms = 1.0;       // per-candidate wall-time cap
    int top_k = 3;             // candidates probed
    double alpha = 0.95;       // guardrail: accept best iff t* <= alpha * t_b

    // Applies AUTOSAGE_PROBE_FRAC / _ITERS / _CAP_MS / _TOPK and
    // AUTOSAGE_GUARDRAIL over the defaults.
    static ProbeConfig from_env();
};

struct CandidateTiming {
    KernelVariant variant;
    double median_ms = 0.0;
    int completed = 0;
    bool capped = false;
};

struct ProbeReport {
    double baseline_ms = 0.0;  // t_b
    int baseline_completed = 0;
    bool baseline_capped = false;
    std::vector<CandidateTiming> candidates;
    int best_index = -1;       // index into candidates, -1 when none timed
    double t_star = 0.0;       // min candidate median
    std::size_t sample_rows = 0;
    double probe_wall_ms = 0.0;     // wall time of the timing section
    double max_single_run_ms = 0.0; // slowest single run observed
};

enum class DecisionSource { Probed, Cached, Replayed, ForcedEnv };
const char* to_string(DecisionSource s);

struct ScheduleDecision {
    std::optional<KernelVariant> choice;  // nullopt = baseline
    ProbeReport report;
    DecisionSource source = DecisionSource::Probed;
    ScheduleKey key;
    double alpha = 0.0;

    std::string choice_string() const;
};

// Shared collaborators for decisions. Null members select process
// defaults; probing serializes on an internal timing lock.
struct ScheduleContext {
    const DeviceProfile* device = nullptr;  // nullptr: calibrated host profile
    ScheduleCache* cache = nullptr;         // nullptr: no caching
    ProbeTimer* timer = nullptr;            // nullptr: steady clock
    ReplayPolicy replay{};
    std::size_t workers = 0;                // 0: all logical cores
};

// Full decision procedure: cache lookup, else feature extraction ->
// roofline shortlist -> micro-probe of baseline and top_k candidates on a
// degree-stratified row sample -> guardrail selection (best iff
// t* <= alpha * t_b, ties favor the candidate).
ScheduleDecision decide_spmm(const CsrMatrix& a, const DenseMatrix& b,
                             const ProbeConfig& cfg, const ScheduleContext& ctx);
ScheduleDecision decide_sddmm(const CsrMatrix& pattern, const DenseMatrix& x,
                              const DenseMatrix& y, const ProbeConfig& cfg,
                              const ScheduleContext& ctx);

// decide + dispatch on the full input.
DenseMatrix spmm_auto(const CsrMatrix& a, const DenseMatrix& b, const ProbeConfig& cfg,
                      const ScheduleContext& ctx);
std::vector<float> sddmm_auto(const CsrMatrix& pattern, const DenseMatrix& x,
                              const DenseMatrix& y, const ProbeConfig& cfg,
                              const ScheduleContext& ctx);

// Kernel executions performed inside probes (warm-ups included) since
// process start or the last reset. Cache hits and replays leave it
// untouched.
std::uint64_t probe_launch_count();
void reset_probe_launch_count();

} // namespace autosage
