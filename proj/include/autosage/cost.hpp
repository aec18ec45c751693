#pragma once

#include "autosage/csr.hpp"
#include "autosage/device.hpp"
#include "autosage/kernels.hpp"

#include <vector>

namespace autosage {

// Roofline-style latency estimate in milliseconds:
//   max(bytes_moved / bw_eff, flops / flops_eff) * penalty(v, gf)
// where mappings without hub handling pay (1 + imbalance) and
// imbalance = max(0, max_degree/mean_degree - 1) / cores, clamped to [0,4]
// (zero for uniform degrees). Used only to order candidates for probing;
// the formula is a replaceable policy, not a performance model claim.
double estimate_cost(const KernelVariant& v, const GraphFeatures& gf, std::size_t f,
                     const DeviceProfile& dp);

// Enumerates the variant grid (mapping {rowparallel, hubsplit} x
// f_tile {32,64,128} x vectorized {on if f mod 4 = 0, off} x
// rows_per_chunk {1,4,16}) sorted ascending by estimate_cost. Ties break
// by mapping (rowparallel first), then smaller f_tile, vectorized first,
// smaller rows_per_chunk, for a deterministic total order.
std::vector<KernelVariant> shortlist(const GraphFeatures& gf, std::size_t f, Op op,
                                     const DeviceProfile& dp);

} // namespace autosage
