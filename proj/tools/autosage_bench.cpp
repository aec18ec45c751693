// Command-line harness: synthetic graph generation, SpMM/SDDMM benchmark
// sweeps with guardrailed auto-scheduling, split/vec4 ablations, the CSR
// attention pipeline, and cache replay. Every CSV gets a .meta.json
// sidecar with the device profile and AUTOSAGE_* environment snapshot.

#include "CLI11.hpp"
#include "json.hpp"

#include "autosage/attention.hpp"
#include "autosage/cache.hpp"
#include "autosage/csr.hpp"
#include "autosage/device.hpp"
#include "autosage/env.hpp"
#include "autosage/generate.hpp"
#include "autosage/io.hpp"
#include "autosage/kernels.hpp"
#include "autosage/scheduler.hpp"
#include "autosage/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

extern char** environ;

namespace {

using json = nlohmann::json;
using namespace autosage;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitReplayMiss = 3;

std::string dataset_name(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

double round3(double v) {
    return std::round(v * 1000.0) / 1000.0;
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

DenseMatrix seeded_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    DenseMatrix d(rows, cols);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> pick(-1.0f, 1.0f);
    for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = pick(rng);
    return d;
}

// median of `iters` timed runs after `warmups` untimed ones
double bench_median_ms(const std::function<void()>& run, int iters, int warmups) {
    for (int i = 0; i < warmups; ++i) run();
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(iters));
    for (int i = 0; i < iters; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        times.push_back(std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count());
    }
    std::sort(times.begin(), times.end());
    return times[(times.size() - 1) / 2];
}

json env_snapshot() {
    json out = json::object();
    for (char** e = environ; *e != nullptr; ++e) {
        const std::string entry(*e);
        if (entry.rfind("AUTOSAGE_", 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        out[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    return out;
}

struct ProbeFlags {
    ProbeConfig cfg = ProbeConfig::from_env();  // env defaults, flags override

    void attach(CLI::App* cmd) {
        cmd->add_option("--probe-frac", cfg.frac, "Probe sample row fraction")
            ->capture_default_str();
        cmd->add_option("--probe-min-rows", cfg.min_rows, "Probe sample minimum rows")
            ->capture_default_str();
        cmd->add_option("--probe-iters", cfg.iters, "Timed probe iterations")
            ->capture_default_str();
        cmd->add_option("--probe-cap-ms", cfg.cap_ms, "Per-candidate probe wall-time cap (ms)")
            ->capture_default_str();
        cmd->add_option("--probe-topk", cfg.top_k, "Candidates probed")
            ->capture_default_str();
        cmd->add_option("--alpha", cfg.alpha, "Guardrail: accept best iff t* <= alpha*t_b")
            ->capture_default_str();
    }
};

struct CacheFlags {
    std::string path = env::get_string("AUTOSAGE_CACHE").value_or("");
    ReplayPolicy replay = ReplayPolicy::from_env();

    void attach(CLI::App* cmd) {
        cmd->add_option("--cache", path, "Schedule cache file (empty disables persistence)")
            ->capture_default_str();
        cmd->add_flag("--replay-only", replay.replay_only,
                      "Serve decisions from the cache only, never probe");
        cmd->add_flag("--replay-strict", replay.strict, "Make replay misses an error");
    }

    // loads an existing cache file; returns whether persistence is on
    bool open(ScheduleCache& cache) const {
        if (path.empty()) return false;
        if (std::filesystem::exists(path)) cache.load(path);
        return true;
    }
};

struct MeasureFlags {
    int iters = 12;
    int warmups = 2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--iters", iters, "Timed iterations per measurement")
            ->capture_default_str();
        cmd->add_option("--warmups", warmups, "Warm-up iterations per measurement")
            ->capture_default_str();
    }
};

void write_sidecar(const std::string& csv_path, const std::string& command,
                   const DeviceProfile& dp, const json& config) {
    json meta;
    meta["artifact_version"] = kArtifactVersion;
    meta["toolchain"] = toolchain_tag();
    meta["command"] = command;
    meta["timestamp_unix"] = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    meta["device"] = {{"device_sig", dp.device_sig},
                      {"bw_eff_bytes_per_s", dp.bw_eff},
                      {"flops_eff_per_s", dp.flops_eff},
                      {"cores", dp.cores}};
    meta["config"] = config;
    meta["env"] = env_snapshot();

    const std::string path = csv_path + ".meta.json";
    std::ofstream f(path);
    if (!f) throw IoError("cannot write sidecar " + path);
    f << meta.dump(2) << "\n";
}

json probe_config_json(const ProbeConfig& cfg) {
    return {{"frac", cfg.frac},     {"min_rows", cfg.min_rows}, {"iters", cfg.iters},
            {"cap_ms", cfg.cap_ms}, {"top_k", cfg.top_k},       {"alpha", cfg.alpha}};
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    return f;
}

void print_graph_summary(const CsrMatrix& m) {
    auto gf = extract_features(m);
    std::printf("nnz=%zu\n", m.nnz());
    std::printf("degree quantiles: p25=%zu p50=%zu p75=%zu p90=%zu p99=%zu max=%zu\n",
                gf.deg_p25, gf.deg_p50, gf.deg_p75, gf.deg_p90, gf.deg_p99, gf.deg_max);
}

// ---------------------------------------------------------------------------
// gen

struct GenErArgs {
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 1;
    std::string out;
};

struct GenHubskewArgs {
    std::size_t n = 0;
    std::size_t k = 4;
    double h = 0.15;
    std::size_t factor = 64;
    std::uint64_t seed = 1;
    std::string out;
};

struct GenHubfixedArgs {
    std::size_t n = 0;
    std::size_t hubs = 1;
    std::size_t hub_deg = 5000;
    std::size_t other_deg = 64;
    std::uint64_t seed = 1;
    std::string out;
};

int run_gen(const CsrMatrix& m, const std::string& out) {
    save_csr(m, out);
    print_graph_summary(m);
    std::printf("wrote %s\n", out.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string graph;
    std::string op = "spmm";
    std::vector<std::size_t> f_list = {64};
    std::uint64_t seed = 1;
    std::string out;
    MeasureFlags measure;
    ProbeFlags probe;
    CacheFlags cache;
};

int run_bench(const BenchArgs& args) {
    const CsrMatrix graph = load_csr(args.graph);
    const Op op = args.op == "sddmm" ? Op::SDDMM : Op::SpMM;
    const std::string ds = dataset_name(args.graph);
    const DeviceProfile& dp = DeviceProfile::host();

    ScheduleCache cache;
    const bool persist = args.cache.open(cache);
    ScheduleContext ctx;
    ctx.device = &dp;
    ctx.cache = &cache;
    ctx.replay = args.cache.replay;

    auto csv = open_csv(args.out);
    csv << "dataset,F,op,choice,baseline_ms,chosen_ms,speedup\n";

    for (std::size_t f : args.f_list) {
        double baseline_ms = 0.0;
        double chosen_ms = 0.0;
        std::string choice;
        if (op == Op::SpMM) {
            const DenseMatrix b = seeded_dense(graph.n_cols, f, args.seed + f);
            const ScheduleDecision d = decide_spmm(graph, b, args.probe.cfg, ctx);
            baseline_ms = bench_median_ms([&] { spmm_baseline(graph, b); },
                                          args.measure.iters, args.measure.warmups);
            if (d.choice) {
                chosen_ms = bench_median_ms([&] { dispatch(*d.choice, graph, b); },
                                            args.measure.iters, args.measure.warmups);
                choice = "autosage";
            } else {
                chosen_ms = bench_median_ms([&] { spmm_baseline(graph, b); },
                                            args.measure.iters, args.measure.warmups);
                choice = "baseline";
            }
        } else {
            const DenseMatrix x = seeded_dense(graph.n_rows, f, args.seed + f);
            const DenseMatrix y = seeded_dense(graph.n_cols, f, args.seed + f + 1);
            const ScheduleDecision d = decide_sddmm(graph, x, y, args.probe.cfg, ctx);
            baseline_ms = bench_median_ms([&] { sddmm_baseline(graph, x, y); },
                                          args.measure.iters, args.measure.warmups);
            if (d.choice) {
                chosen_ms = bench_median_ms([&] { dispatch(*d.choice, graph, x, y); },
                                            args.measure.iters, args.measure.warmups);
                choice = "autosage";
            } else {
                chosen_ms = bench_median_ms([&] { sddmm_baseline(graph, x, y); },
                                            args.measure.iters, args.measure.warmups);
                choice = "baseline";
            }
        }
        const double b3 = round3(baseline_ms);
        const double c3 = round3(chosen_ms);
        csv << ds << ',' << f << ',' << args.op << ',' << choice << ',' << fmt3(baseline_ms)
            << ',' << fmt3(chosen_ms) << ',' << fmt3(c3 > 0.0 ? b3 / c3 : 0.0) << '\n';
    }
    csv.close();

    if (persist) cache.store(args.cache.path);
    write_sidecar(args.out, "bench", dp,
                  {{"graph", args.graph},
                   {"op", args.op},
                   {"f_list", args.f_list},
                   {"iters", args.measure.iters},
                   {"warmups", args.measure.warmups},
                   {"probe", probe_config_json(args.probe.cfg)},
                   {"cache", args.cache.path},
                   {"replay_only", args.cache.replay.replay_only},
                   {"replay_strict", args.cache.replay.strict},
                   {"seed", args.seed}});
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-split

struct SweepSplitArgs {
    std::string graph;
    std::size_t f = 128;
    std::vector<std::size_t> thresholds = {64, 256, 1024, 4096};
    std::uint64_t seed = 1;
    std::string out;
    MeasureFlags measure;
};

int run_sweep_split(const SweepSplitArgs& args) {
    const CsrMatrix graph = load_csr(args.graph);
    const std::string ds = dataset_name(args.graph);
    const DeviceProfile& dp = DeviceProfile::host();
    const DenseMatrix b = seeded_dense(graph.n_cols, args.f, args.seed);

    const DenseMatrix ref = spmm_baseline(graph, b);
    const double baseline_ms = bench_median_ms([&] { spmm_baseline(graph, b); },
                                               args.measure.iters, args.measure.warmups);

    auto csv = open_csv(args.out);
    csv << "dataset,F,threshold,baseline_ms,hubsplit_ms,speedup\n";
    for (std::size_t threshold : args.thresholds) {
        KernelVariant v;
        v.op = Op::SpMM;
        v.mapping = Mapping::HubSplit;
        v.f_tile = 64;
        v.rows_per_chunk = 4;
        v.vectorized = args.f % 4 == 0;
        v.hub_threshold = threshold;

        // correctness re-check against the baseline before timing
        const DenseMatrix split = spmm_hubsplit(graph, b, v);
        for (std::size_t i = 0; i < split.size(); ++i) {
            const double want = ref.data()[i];
            if (std::abs(split.data()[i] - want) > 1e-6 + 1e-5 * std::abs(want)) {
                std::fprintf(stderr, "hubsplit mismatch vs baseline at threshold %zu\n",
                             threshold);
                return kExitUsage;
            }
        }

        const double split_ms = bench_median_ms([&] { spmm_hubsplit(graph, b, v); },
                                                args.measure.iters, args.measure.warmups);
        const double b3 = round3(baseline_ms);
        const double s3 = round3(split_ms);
        csv << ds << ',' << args.f << ',' << threshold << ',' << fmt3(baseline_ms) << ','
            << fmt3(split_ms) << ',' << fmt3(s3 > 0.0 ? b3 / s3 : 0.0) << '\n';
    }
    csv.close();
    write_sidecar(args.out, "sweep-split", dp,
                  {{"graph", args.graph},
                   {"f", args.f},
                   {"thresholds", args.thresholds},
                   {"iters", args.measure.iters},
                   {"warmups", args.measure.warmups},
                   {"seed", args.seed}});
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// ablate-vec

struct AblateVecArgs {
    std::string graph;
    std::string op = "spmm";
    std::vector<std::size_t> f_list = {64};
    std::uint64_t seed = 1;
    std::string out;
    MeasureFlags measure;
    ProbeFlags probe;
};

int run_ablate_vec(const AblateVecArgs& args) {
    const CsrMatrix graph = load_csr(args.graph);
    const Op op = args.op == "sddmm" ? Op::SDDMM : Op::SpMM;
    const std::string ds = dataset_name(args.graph);
    const DeviceProfile& dp = DeviceProfile::host();

    ScheduleContext ctx;
    ctx.device = &dp;

    auto csv = open_csv(args.out);
    csv << "dataset,F,op,variant,off_ms,on_ms,speedup\n";
    for (std::size_t f : args.f_list) {
        const DenseMatrix x = seeded_dense(graph.n_rows, f, args.seed + f);
        const DenseMatrix y = seeded_dense(graph.n_cols, f, args.seed + f + 1);
        const DenseMatrix& b = y;  // SpMM dense operand, n_cols x f

        ScheduleDecision d = op == Op::SpMM ? decide_spmm(graph, b, args.probe.cfg, ctx)
                                            : decide_sddmm(graph, x, y, args.probe.cfg, ctx);
        // ablate the chosen variant; fall back to the best probed candidate
        // when the guardrail picked the baseline
        KernelVariant v;
        if (d.choice) {
            v = *d.choice;
        } else if (d.report.best_index >= 0) {
            v = d.report.candidates[static_cast<std::size_t>(d.report.best_index)].variant;
        } else {
            v = shortlist(extract_features(graph), f, op, dp).front();
        }

        if (f % 4 != 0) {
            csv << ds << ',' << f << ',' << args.op << ',' << variant_to_string(v)
                << ",,,ineligible\n";
            continue;
        }

        KernelVariant on = v;
        on.vectorized = true;
        KernelVariant off = v;
        off.vectorized = false;

        auto run_variant = [&](const KernelVariant& kv) {
            return op == Op::SpMM
                       ? bench_median_ms([&] { dispatch(kv, graph, b); }, args.measure.iters,
                                         args.measure.warmups)
                       : bench_median_ms([&] { dispatch(kv, graph, x, y); },
                                         args.measure.iters, args.measure.warmups);
        };
        const double on_ms = run_variant(on);
        const double off_ms = run_variant(off);
        const double on3 = round3(on_ms);
        const double off3 = round3(off_ms);
        csv << ds << ',' << f << ',' << args.op << ',' << variant_to_string(v) << ','
            << fmt3(off_ms) << ',' << fmt3(on_ms) << ','
            << fmt3(on3 > 0.0 ? off3 / on3 : 0.0) << '\n';
    }
    csv.close();
    write_sidecar(args.out, "ablate-vec", dp,
                  {{"graph", args.graph},
                   {"op", args.op},
                   {"f_list", args.f_list},
                   {"iters", args.measure.iters},
                   {"warmups", args.measure.warmups},
                   {"probe", probe_config_json(args.probe.cfg)},
                   {"seed", args.seed}});
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// attention

struct AttentionArgs {
    std::string graph;
    std::size_t f = 64;
    std::size_t fv = 0;  // 0: same as f
    std::uint64_t seed = 1;
    std::string out;
    MeasureFlags measure{5, 1};
    ProbeFlags probe;
    CacheFlags cache;
};

int run_attention(const AttentionArgs& args) {
    const CsrMatrix graph = load_csr(args.graph);
    const std::size_t fv = args.fv == 0 ? args.f : args.fv;
    const std::string ds = dataset_name(args.graph);
    const DeviceProfile& dp = DeviceProfile::host();

    const DenseMatrix q = seeded_dense(graph.n_rows, args.f, args.seed);
    const DenseMatrix k = seeded_dense(graph.n_cols, args.f, args.seed + 1);
    const DenseMatrix v = seeded_dense(graph.n_cols, fv, args.seed + 2);

    ScheduleCache cache;
    const bool persist = args.cache.open(cache);
    ScheduleContext ctx;
    ctx.device = &dp;
    ctx.cache = &cache;

    auto csv = open_csv(args.out);
    csv << "dataset,phase,F,Fv,sddmm_choice,spmm_choice,sddmm_source,spmm_source,"
           "probe_launches,median_ms\n";

    auto emit = [&](const char* phase, const AttentionRun& run, std::uint64_t probes,
                    double median_ms) {
        csv << ds << ',' << phase << ',' << args.f << ',' << fv << ','
            << run.sddmm_decision.choice_string() << ',' << run.spmm_decision.choice_string()
            << ',' << to_string(run.sddmm_decision.source) << ','
            << to_string(run.spmm_decision.source) << ',' << probes << ','
            << fmt3(median_ms) << '\n';
    };

    // cold: probes included in the single measured run
    reset_probe_launch_count();
    const auto cold0 = std::chrono::steady_clock::now();
    AttentionRun cold = attention_probe_breakdown(graph, q, k, v, args.probe.cfg, ctx);
    const double cold_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - cold0)
                               .count();
    emit("cold", cold, probe_launch_count(), cold_ms);

    // warm: cache hits, no probes
    reset_probe_launch_count();
    AttentionRun warm_run = attention_probe_breakdown(graph, q, k, v, args.probe.cfg, ctx);
    const double warm_ms = bench_median_ms(
        [&] { csr_attention_forward(graph, q, k, v, args.probe.cfg, ctx); },
        args.measure.iters, args.measure.warmups);
    emit("warm", warm_run, probe_launch_count(), warm_ms);

    // replay: decisions from the (re-loaded) cache only
    if (persist) {
        cache.store(args.cache.path);
        cache.clear();
        cache.load(args.cache.path);
    }
    ctx.replay.replay_only = true;
    ctx.replay.strict = args.cache.replay.strict;
    reset_probe_launch_count();
    AttentionRun replay_run = attention_probe_breakdown(graph, q, k, v, args.probe.cfg, ctx);
    const double replay_ms = bench_median_ms(
        [&] { csr_attention_forward(graph, q, k, v, args.probe.cfg, ctx); },
        args.measure.iters, args.measure.warmups);
    emit("replay", replay_run, probe_launch_count(), replay_ms);

    csv.close();
    if (persist) cache.store(args.cache.path);
    write_sidecar(args.out, "attention", dp,
                  {{"graph", args.graph},
                   {"f", args.f},
                   {"fv", fv},
                   {"iters", args.measure.iters},
                   {"warmups", args.measure.warmups},
                   {"probe", probe_config_json(args.probe.cfg)},
                   {"cache", args.cache.path},
                   {"seed", args.seed}});
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

struct ReplayArgs {
    std::string cache_path;
    std::string graph;
    std::string op = "spmm";
    std::size_t f = 64;
    bool strict = ReplayPolicy::from_env().strict;
    std::uint64_t seed = 1;
    MeasureFlags measure;
    ProbeFlags probe;
};

int run_replay(const ReplayArgs& args) {
    const CsrMatrix graph = load_csr(args.graph);
    const Op op = args.op == "sddmm" ? Op::SDDMM : Op::SpMM;
    const DeviceProfile& dp = DeviceProfile::host();

    ScheduleCache cache;
    cache.load(args.cache_path);

    ScheduleContext ctx;
    ctx.device = &dp;
    ctx.cache = &cache;
    ctx.replay.replay_only = true;
    ctx.replay.strict = args.strict;

    const DenseMatrix x = seeded_dense(graph.n_rows, args.f, args.seed + args.f);
    const DenseMatrix y = seeded_dense(graph.n_cols, args.f, args.seed + args.f + 1);
    const DenseMatrix& b = y;

    const ScheduleDecision d = op == Op::SpMM ? decide_spmm(graph, b, args.probe.cfg, ctx)
                                              : decide_sddmm(graph, x, y, args.probe.cfg, ctx);

    if (auto rec = cache.get(d.key)) {
        if (rec->choice != d.choice_string()) {
            std::fprintf(stderr, "replayed decision does not match the cache record\n");
            return kExitUsage;
        }
        std::printf("verified: decision matches cache record (t_b=%s, t*=%s, alpha=%s)\n",
                    fmt3(rec->t_b).c_str(), fmt3(rec->t_star).c_str(),
                    fmt3(rec->alpha).c_str());
    } else {
        std::printf("cache has no record for this key, served baseline fallback\n");
    }

    double median_ms = 0.0;
    if (op == Op::SpMM) {
        median_ms = d.choice ? bench_median_ms([&] { dispatch(*d.choice, graph, b); },
                                               args.measure.iters, args.measure.warmups)
                             : bench_median_ms([&] { spmm_baseline(graph, b); },
                                               args.measure.iters, args.measure.warmups);
    } else {
        median_ms = d.choice ? bench_median_ms([&] { dispatch(*d.choice, graph, x, y); },
                                               args.measure.iters, args.measure.warmups)
                             : bench_median_ms([&] { sddmm_baseline(graph, x, y); },
                                               args.measure.iters, args.measure.warmups);
    }
    std::printf("key=%s\nchoice=%s\nsource=%s\nretimed_median_ms=%s\n",
                d.key.to_string().c_str(), d.choice_string().c_str(), to_string(d.source),
                fmt3(median_ms).c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"autosage-bench: input-aware scheduling harness for CSR SpMM/SDDMM"};
    app.require_subcommand(1);

    std::function<int()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic graph");
    gen->require_subcommand(1);

    GenErArgs er;
    auto* gen_er_cmd = gen->add_subcommand("er", "Uniform random pattern");
    gen_er_cmd->add_option("--n", er.n, "Rows/columns")->required();
    gen_er_cmd->add_option("--p", er.p, "Edge probability")->required();
    gen_er_cmd->add_option("--seed", er.seed)->capture_default_str();
    gen_er_cmd->add_option("--out", er.out, "Output path")->required();
    gen_er_cmd->callback(
        [&] { action = [&] { return run_gen(gen_er(er.n, er.p, er.seed), er.out); }; });

    GenHubskewArgs hs;
    auto* gen_hs = gen->add_subcommand("hubskew", "Random hub rows at k*factor degree");
    gen_hs->add_option("--n", hs.n)->required();
    gen_hs->add_option("--k", hs.k, "Base degree")->capture_default_str();
    gen_hs->add_option("--hub-frac", hs.h, "Hub row fraction")->capture_default_str();
    gen_hs->add_option("--factor", hs.factor, "Hub degree multiplier")->capture_default_str();
    gen_hs->add_option("--seed", hs.seed)->capture_default_str();
    gen_hs->add_option("--out", hs.out)->required();
    gen_hs->callback([&] {
        action = [&] {
            return run_gen(gen_hubskew(hs.n, hs.k, hs.h, hs.seed, hs.factor), hs.out);
        };
    });

    GenHubfixedArgs hf;
    auto* gen_hf = gen->add_subcommand("hubfixed", "Fixed hub rows at an exact degree");
    gen_hf->add_option("--n", hf.n)->required();
    gen_hf->add_option("--hubs", hf.hubs, "Number of hub rows")->capture_default_str();
    gen_hf->add_option("--hub-deg", hf.hub_deg)->capture_default_str();
    gen_hf->add_option("--other-deg", hf.other_deg)->capture_default_str();
    gen_hf->add_option("--seed", hf.seed)->capture_default_str();
    gen_hf->add_option("--out", hf.out)->required();
    gen_hf->callback([&] {
        action = [&] {
            return run_gen(gen_hub_fixed(hf.n, hf.hubs, hf.hub_deg, hf.other_deg, hf.seed),
                           hf.out);
        };
    });

    // bench
    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Baseline vs auto-scheduled timing sweep");
    bench_cmd->add_option("--graph", bench.graph, "Graph file")->required();
    bench_cmd->add_option("--op", bench.op)->check(CLI::IsMember({"spmm", "sddmm"}))
        ->capture_default_str();
    bench_cmd->add_option("--f", bench.f_list, "Feature widths")->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "CSV output path")->required();
    bench.measure.attach(bench_cmd);
    bench.probe.attach(bench_cmd);
    bench.cache.attach(bench_cmd);
    bench_cmd->callback([&] { action = [&] { return run_bench(bench); }; });

    // sweep-split
    SweepSplitArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep-split", "Baseline vs hub-split threshold sweep");
    sweep_cmd->add_option("--graph", sweep.graph)->required();
    sweep_cmd->add_option("--f", sweep.f)->capture_default_str();
    sweep_cmd->add_option("--thresholds", sweep.thresholds)->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep.seed)->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out)->required();
    sweep.measure.attach(sweep_cmd);
    sweep_cmd->callback([&] { action = [&] { return run_sweep_split(sweep); }; });

    // ablate-vec
    AblateVecArgs ablate;
    auto* ablate_cmd = app.add_subcommand("ablate-vec", "Vec4 on/off ablation (speedup = off/on)");
    ablate_cmd->add_option("--graph", ablate.graph)->required();
    ablate_cmd->add_option("--op", ablate.op)->check(CLI::IsMember({"spmm", "sddmm"}))
        ->capture_default_str();
    ablate_cmd->add_option("--f", ablate.f_list)->delimiter(',')->capture_default_str();
    ablate_cmd->add_option("--seed", ablate.seed)->capture_default_str();
    ablate_cmd->add_option("--out", ablate.out)->required();
    ablate.measure.attach(ablate_cmd);
    ablate.probe.attach(ablate_cmd);
    ablate_cmd->callback([&] { action = [&] { return run_ablate_vec(ablate); }; });

    // attention
    AttentionArgs attn;
    auto* attn_cmd = app.add_subcommand("attention", "CSR attention pipeline: cold/warm/replay");
    attn_cmd->add_option("--graph", attn.graph)->required();
    attn_cmd->add_option("--f", attn.f, "Q/K feature width")->capture_default_str();
    attn_cmd->add_option("--fv", attn.fv, "V feature width (0: same as --f)")
        ->capture_default_str();
    attn_cmd->add_option("--seed", attn.seed)->capture_default_str();
    attn_cmd->add_option("--out", attn.out)->required();
    attn.measure.attach(attn_cmd);
    attn.probe.attach(attn_cmd);
    attn.cache.attach(attn_cmd);
    attn_cmd->callback([&] { action = [&] { return run_attention(attn); }; });

    // replay
    ReplayArgs replay;
    auto* replay_cmd = app.add_subcommand("replay", "Re-run a cached decision without probing");
    replay_cmd->add_option("--cache", replay.cache_path)->required();
    replay_cmd->add_option("--graph", replay.graph)->required();
    replay_cmd->add_option("--op", replay.op)->check(CLI::IsMember({"spmm", "sddmm"}))
        ->capture_default_str();
    replay_cmd->add_option("--f", replay.f)->capture_default_str();
    replay_cmd->add_flag("--strict", replay.strict, "Treat a replay miss as an error");
    replay_cmd->add_option("--seed", replay.seed)->capture_default_str();
    replay.measure.attach(replay_cmd);
    replay.probe.attach(replay_cmd);
    replay_cmd->callback([&] { action = [&] { return run_replay(replay); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const ReplayMiss& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitReplayMiss;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const CacheError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
