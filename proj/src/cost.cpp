#include "autosage/cost.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace autosage {

double estimate_cost(const KernelVariant& v, const GraphFeatures& gf, std::size_t f,
                     const DeviceProfile& dp) {
    if (dp.bw_eff <= 0.0 || dp.flops_eff <= 0.0) {
        throw std::invalid_argument("estimate_cost: device profile not calibrated");
    }
    if (gf.nnz == 0) return 0.0;

    const double nnz = static_cast<double>(gf.nnz);
    const double n = static_cast<double>(gf.n_rows);
    const double fd = static_cast<double>(f);

    double bytes = 0.0;
    if (v.op == Op::SpMM) {
        // rowptr+colind traffic, gathered B rows, C writeback, rowptr
        bytes = 8.0 * nnz + 4.0 * nnz * fd + 4.0 * n * fd + 8.0 * (n + 1.0);
    } else {
        // per entry: X and Y rows gathered, one f32 written back
        bytes = 8.0 * nnz + 4.0 * nnz * fd * 2.0 + 4.0 * nnz;
    }
    const double flops = 2.0 * nnz * fd;
    const double seconds = std::max(bytes / dp.bw_eff, flops / dp.flops_eff);

    double penalty = 1.0;
    if (v.mapping != Mapping::HubSplit) {
        const double mean = gf.mean_degree;
        double imbalance = 0.0;
        if (mean > 0.0) {
            imbalance = (static_cast<double>(gf.deg_max) / mean - 1.0) /
                        static_cast<double>(std::max<std::size_t>(dp.cores, 1));
        }
        imbalance = std::clamp(imbalance, 0.0, 4.0);
        penalty = 1.0 + imbalance;
    }
    return seconds * 1e3 * penalty;
}

std::vector<KernelVariant> shortlist(const GraphFeatures& gf, std::size_t f, Op op,
                                     const DeviceProfile& dp) {
    static constexpr std::size_t kTiles[] = {32, 64, 128};
    static constexpr std::size_t kRowsPerChunk[] = {1, 4, 16};
    const bool vec_eligible = f > 0 && f % 4 == 0;

    std::vector<KernelVariant> grid;
    for (auto mapping : {Mapping::RowParallel, Mapping::HubSplit}) {
        for (auto ft : kTiles) {
            for (auto rpc : kRowsPerChunk) {
                for (int vec = vec_eligible ? 1 : 0; vec >= 0; --vec) {
                    KernelVariant v;
                    v.op = op;
                    v.mapping = mapping;
                    v.f_tile = ft;
                    v.rows_per_chunk = rpc;
                    v.vectorized = vec == 1;
                    v.hub_threshold = kDefaultHubThreshold;
                    grid.push_back(v);
                }
            }
        }
    }

    auto rank = [&](const KernelVariant& v) {
        return std::make_tuple(estimate_cost(v, gf, f, dp),
                               v.mapping == Mapping::RowParallel ? 0 : 1, v.f_tile,
                               v.vectorized ? 0 : 1, v.rows_per_chunk);
    };
    std::stable_sort(grid.begin(), grid.end(),
                     [&](const KernelVariant& a, const KernelVariant& b) {
                         return rank(a) < rank(b);
                     });
    return grid;
}

} // namespace autosage
