#include "autosage/scheduler.hpp"

#include "autosage/env.hpp"
#include "autosage/generate.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace autosage {

namespace {

std::atomic<std::uint64_t> g_probe_launches{0};

// At most one probe in flight per process: overlapping timed kernels
// would corrupt each other's measurements.
std::mutex g_probe_mutex;

void check_config(const ProbeConfig& cfg) {
    if (!(cfg.frac > 0.0 && cfg.frac <= 1.0)) {
        throw std::invalid_argument("probe config: frac must be in (0,1]");
    }
    if (cfg.iters < 1) throw std::invalid_argument("probe config: iters must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
        throw std::invalid_argument("probe config: alpha must be in (0,1]");
    }
    if (cfg.top_k < 1) throw std::invalid_argument("probe config: top_k must be >= 1");
}

std::uint64_t unix_now() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

// Setting any dispatch-level kernel knob pins the decision: probing other
// candidates would be pointless when dispatch overrides them anyway.
// AUTOSAGE_HUB_T selects the hub-split mapping, the others keep
// rowparallel.
std::optional<KernelVariant> forced_env_variant(Op op) {
    auto ft = env::get_int("AUTOSAGE_FTILE");
    auto wpb = env::get_int("AUTOSAGE_WPB");
    auto hub = env::get_int("AUTOSAGE_HUB_T");
    if (!ft && !wpb && !hub) return std::nullopt;
    KernelVariant v;
    v.op = op;
    v.mapping = hub ? Mapping::HubSplit : Mapping::RowParallel;
    if (ft && *ft > 0) v.f_tile = static_cast<std::size_t>(*ft);
    if (wpb && *wpb > 0) v.rows_per_chunk = static_cast<std::size_t>(*wpb);
    if (hub && *hub > 0) v.hub_threshold = static_cast<std::size_t>(*hub);
    v.vectorized = false;
    return v;
}

ScheduleDecision from_record(const CacheRecord& rec, DecisionSource source) {
    ScheduleDecision d;
    d.key = rec.key;
    d.alpha = rec.alpha;
    d.source = source;
    if (rec.choice != "baseline") d.choice = variant_from_string(rec.choice);
    d.report.baseline_ms = rec.t_b;
    d.report.t_star = rec.t_star;
    return d;
}

CacheRecord to_record(const ScheduleDecision& d) {
    CacheRecord rec;
    rec.key = d.key;
    rec.choice = d.choice_string();
    rec.t_b = d.report.baseline_ms;
    rec.t_star = d.report.t_star;
    rec.alpha = d.alpha;
    rec.timestamp = unix_now();
    rec.toolchain = toolchain_tag();
    return rec;
}

// Core of decide for both ops. run_baseline/run_candidate execute one
// kernel launch on the sample operands.
ScheduleDecision decide_common(const CsrMatrix& m, std::size_t f, Op op,
                               const ProbeConfig& cfg, const ScheduleContext& ctx,
                               const std::function<void()>& run_baseline,
                               const std::function<void(const KernelVariant&)>& run_candidate,
                               std::size_t sample_rows) {
    check_config(cfg);
    const DeviceProfile& dp = ctx.device ? *ctx.device : DeviceProfile::host();

    ScheduleDecision d;
    d.key = ScheduleKey{dp.device_sig, graph_sig(m), f, op};
    d.alpha = cfg.alpha;

    if (auto forced = forced_env_variant(op)) {
        d.choice = *forced;
        d.source = DecisionSource::ForcedEnv;
        return d;
    }

    if (ctx.cache) {
        if (auto rec = ctx.cache->get(d.key)) {
            return from_record(*rec, ctx.replay.replay_only ? DecisionSource::Replayed
                                                            : DecisionSource::Cached);
        }
    }
    if (ctx.replay.replay_only) {
        if (ctx.replay.strict) throw ReplayMiss(d.key);
        std::fprintf(stderr, "autosage: warning: replay miss for %s, using baseline\n",
                     d.key.to_string().c_str());
        d.source = DecisionSource::Replayed;
        d.choice = std::nullopt;
        return d;
    }

    // probe
    const GraphFeatures gf = extract_features(m);
    auto candidates = shortlist(gf, f, op, dp);
    if (candidates.size() > static_cast<std::size_t>(cfg.top_k)) {
        candidates.resize(static_cast<std::size_t>(cfg.top_k));
    }

    ProbeTimer* timer = ctx.timer ? ctx.timer : &SteadyTimer::instance();
    std::lock_guard<std::mutex> probe_lock(g_probe_mutex);
    const auto wall0 = std::chrono::steady_clock::now();

    d.report.sample_rows = sample_rows;
    auto tb = time_kernel("baseline", run_baseline, cfg.iters, cfg.cap_ms, timer);
    g_probe_launches += static_cast<std::uint64_t>(tb.launches);
    d.report.baseline_ms = tb.median_ms;
    d.report.baseline_completed = tb.completed;
    d.report.baseline_capped = tb.capped;
    d.report.max_single_run_ms = tb.max_run_ms;

    double t_star = std::numeric_limits<double>::infinity();
    int best = -1;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const KernelVariant& cand = candidates[c];
        auto st = time_kernel(variant_to_string(cand), [&] { run_candidate(cand); },
                              cfg.iters, cfg.cap_ms, timer);
        g_probe_launches += static_cast<std::uint64_t>(st.launches);
        d.report.candidates.push_back({cand, st.median_ms, st.completed, st.capped});
        d.report.max_single_run_ms = std::max(d.report.max_single_run_ms, st.max_run_ms);
        if (st.median_ms < t_star) {
            t_star = st.median_ms;
            best = static_cast<int>(c);
        }
    }
    d.report.t_star = t_star;
    d.report.best_index = best;
    d.report.probe_wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - wall0)
                                 .count();

    if (best >= 0 && t_star <= cfg.alpha * d.report.baseline_ms) {
        d.choice = candidates[static_cast<std::size_t>(best)];
    } else {
        d.choice = std::nullopt;
    }
    d.source = DecisionSource::Probed;

    if (ctx.cache) ctx.cache->put(to_record(d));
    return d;
}

} // namespace

ProbeConfig ProbeConfig::from_env() {
    ProbeConfig cfg;
    if (auto v = env::get_double("AUTOSAGE_PROBE_FRAC")) cfg.frac = *v;
    if (auto v = env::get_int("AUTOSAGE_PROBE_ITERS")) cfg.iters = static_cast<int>(*v);
    if (auto v = env::get_double("AUTOSAGE_PROBE_CAP_MS")) cfg.cap_ms = *v;
    if (auto v = env::get_int("AUTOSAGE_PROBE_TOPK")) cfg.top_k = static_cast<int>(*v);
    if (auto v = env::get_double("AUTOSAGE_GUARDRAIL")) cfg.alpha = *v;
    return cfg;
}

const char* to_string(DecisionSource s) {
    switch (s) {
        case DecisionSource::Probed: return "probed";
        case DecisionSource::Cached: return "cached";
        case DecisionSource::Replayed: return "replayed";
        case DecisionSource::ForcedEnv: return "forced-env";
    }
    return "?";
}

std::string ScheduleDecision::choice_string() const {
    return choice ? variant_to_string(*choice) : "baseline";
}

ScheduleDecision decide_spmm(const CsrMatrix& a, const DenseMatrix& b,
                             const ProbeConfig& cfg, const ScheduleContext& ctx) {
    if (a.n_cols != b.n_rows()) throw std::invalid_argument("decide_spmm: dimension mismatch");
    const auto rows = sample_row_indices(a, cfg.frac, cfg.min_rows);
    const CsrMatrix sample = slice_rows(a, rows);
    return decide_common(
        a, b.n_cols(), Op::SpMM, cfg, ctx, [&] { spmm_baseline(sample, b); },
        [&](const KernelVariant& v) { dispatch(v, sample, b, ctx.workers); }, rows.size());
}

ScheduleDecision decide_sddmm(const CsrMatrix& pattern, const DenseMatrix& x,
                              const DenseMatrix& y, const ProbeConfig& cfg,
                              const ScheduleContext& ctx) {
    if (x.n_cols() != y.n_cols() || x.n_rows() != pattern.n_rows ||
        y.n_rows() != pattern.n_cols) {
        throw std::invalid_argument("decide_sddmm: dimension mismatch");
    }
    const auto rows = sample_row_indices(pattern, cfg.frac, cfg.min_rows);
    const CsrMatrix sample = slice_rows(pattern, rows);
    // the sliced pattern renumbers rows, so gather the matching x rows;
    // y is indexed by columns and is reused unchanged
    DenseMatrix xs(rows.size(), x.n_cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto src = x.row(rows[r]);
        std::copy(src.begin(), src.end(), xs.row(r).begin());
    }
    return decide_common(
        pattern, x.n_cols(), Op::SDDMM, cfg, ctx, [&] { sddmm_baseline(sample, xs, y); },
        [&](const KernelVariant& v) { dispatch(v, sample, xs, y, ctx.workers); }, rows.size());
}

DenseMatrix spmm_auto(const CsrMatrix& a, const DenseMatrix& b, const ProbeConfig& cfg,
                      const ScheduleContext& ctx) {
    const ScheduleDecision d = decide_spmm(a, b, cfg, ctx);
    if (d.choice) return dispatch(*d.choice, a, b, ctx.workers).output;
    return spmm_baseline(a, b);
}

std::vector<float> sddmm_auto(const CsrMatrix& pattern, const DenseMatrix& x,
                              const DenseMatrix& y, const ProbeConfig& cfg,
                              const ScheduleContext& ctx) {
    const ScheduleDecision d = decide_sddmm(pattern, x, y, cfg, ctx);
    if (d.choice) return dispatch(*d.choice, pattern, x, y, ctx.workers).values;
    return sddmm_baseline(pattern, x, y);
}

std::uint64_t probe_launch_count() {
    return g_probe_launches.load();
}

void reset_probe_launch_count() {
    g_probe_launches.store(0);
}

} // namespace autosage
