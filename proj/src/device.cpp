#include "autosage/device.hpp"

#include "autosage/parallel.hpp"
#include "autosage/version.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <vector>

namespace autosage {

namespace {

std::string cpu_model() {
    std::ifstream f("/proc/cpuinfo");
    std::string line;
    while (std::getline(f, line)) {
        if (line.rfind("model name", 0) == 0) {
            auto pos = line.find(':');
            if (pos != std::string::npos) {
                std::string name = line.substr(pos + 1);
                while (!name.empty() && name.front() == ' ') name.erase(name.begin());
                for (auto& c : name) {
                    if (c == '\t' || c == '\n') c = ' ';
                }
                return name;
            }
        }
    }
    return "unknown-cpu";
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Streaming triad a[i] = b[i] + s*c[i] over ~64 MB of doubles, run across
// all workers; best of 3 passes.
double measure_bandwidth(std::size_t workers) {
    constexpr std::size_t kTotalBytes = 64ULL << 20;
    const std::size_t n = kTotalBytes / (3 * sizeof(double));
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 2.0);

    const std::size_t n_chunks = workers * 8;
    const std::size_t chunk = (n + n_chunks - 1) / n_chunks;
    double best_ms = 1e300;
    for (int pass = 0; pass < 3; ++pass) {
        const double t0 = now_ms();
        parallel_for(n_chunks, workers, [&](std::size_t t) {
            const std::size_t i0 = t * chunk;
            const std::size_t i1 = std::min(i0 + chunk, n);
            const double s = 1.0 + pass;
            for (std::size_t i = i0; i < i1; ++i) a[i] = b[i] + s * c[i];
        });
        best_ms = std::min(best_ms, now_ms() - t0);
    }
    const double bytes_per_pass = 3.0 * static_cast<double>(n) * sizeof(double);
    return bytes_per_pass / (best_ms * 1e-3);
}

// Independent fused multiply-add chains per worker; 2 FLOP per iteration
// per chain.
double measure_flops(std::size_t workers) {
    constexpr std::size_t kItersPerWorker = 1u << 22;
    constexpr int kChains = 8;
    std::vector<double> sink(workers, 0.0);
    double best_ms = 1e300;
    for (int pass = 0; pass < 3; ++pass) {
        const double t0 = now_ms();
        parallel_for(workers, workers, [&](std::size_t w) {
            double x[kChains];
            for (int k = 0; k < kChains; ++k) x[k] = 0.5 + 0.01 * k + 1e-9 * pass;
            const double m = 0.999999;
            const double d = 1e-7;
            for (std::size_t i = 0; i < kItersPerWorker; ++i) {
                for (int k = 0; k < kChains; ++k) x[k] = x[k] * m + d;
            }
            double s = 0.0;
            for (int k = 0; k < kChains; ++k) s += x[k];
            sink[w] = s;
        });
        best_ms = std::min(best_ms, now_ms() - t0);
    }
    // `sink` keeps the loops observable
    double total = 0.0;
    for (double s : sink) total += s;
    volatile double keep = total;
    (void)keep;
    const double flops = 2.0 * kChains * static_cast<double>(kItersPerWorker) *
                         static_cast<double>(workers);
    return flops / (best_ms * 1e-3);
}

} // namespace

std::string host_device_sig() {
    return cpu_model() + "|cores=" + std::to_string(default_workers()) + "|" + kArtifactVersion;
}

DeviceProfile DeviceProfile::fixed(double bw_eff, double flops_eff, std::size_t cores,
                                   const std::string& sig_tag) {
    DeviceProfile dp;
    dp.device_sig = sig_tag + "|cores=" + std::to_string(cores) + "|" + kArtifactVersion;
    dp.bw_eff = bw_eff;
    dp.flops_eff = flops_eff;
    dp.cores = cores;
    return dp;
}

const DeviceProfile& DeviceProfile::host() {
    static const DeviceProfile dp = [] {
        DeviceProfile p;
        p.cores = default_workers();
        p.device_sig = host_device_sig();
        p.bw_eff = measure_bandwidth(p.cores);
        p.flops_eff = measure_flops(p.cores);
        return p;
    }();
    return dp;
}

} // namespace autosage
