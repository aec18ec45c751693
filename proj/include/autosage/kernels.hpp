#pragma once

#include "autosage/csr.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace autosage {

enum class Op { SpMM, SDDMM };
enum class Mapping { Baseline, RowParallel, HubSplit };

const char* to_string(Op op);
const char* to_string(Mapping m);

// One point in the schedule space: op x work mapping x feature tile x
// rows-per-chunk x vectorization. rows_per_chunk is the multicore analogue
// of warps-per-block; HubSplit additionally splits rows with degree >=
// hub_threshold across workers.
struct KernelVariant {
    Op op = Op::SpMM;
    Mapping mapping = Mapping::RowParallel;
    std::size_t f_tile = 64;
    std::size_t rows_per_chunk = 4;
    bool vectorized = false;
    std::size_t hub_threshold = kDefaultHubThreshold;

    bool operator==(const KernelVariant&) const = default;
};

// Canonical text form, e.g. "spmm,hubsplit,ft=128,rpc=4,vec=1,hubt=256".
std::string variant_to_string(const KernelVariant& v);
KernelVariant variant_from_string(const std::string& s);

struct KernelResult {
    DenseMatrix output;          // SpMM result
    std::vector<float> values;   // SDDMM result, aligned with pattern colind
    KernelVariant variant;       // variant after env overrides
    bool vectorized_path = false;  // true iff the 4-wide path actually ran
    double elapsed_ms = 0.0;
};

// vec4 gate: F mod 4 == 0 and every dense operand 16-byte aligned.
bool vec4_eligible(std::size_t f, std::initializer_list<const DenseMatrix*> dense);

// Reference serial SpMM, C[i,:] = sum_j a[i,j] * B[j,:], 64-bit accumulation
// rounded to f32. Guardrail baseline.
DenseMatrix spmm_baseline(const CsrMatrix& a, const DenseMatrix& b);

// Same math, rows processed in chunks of rows_per_chunk across workers,
// inner loop tiled over features in f_tile blocks; 4-wide lanes when the
// variant requests vectorization and the gate passes (silent scalar
// fallback otherwise). workers = 0 means all logical cores.
DenseMatrix spmm_rowparallel(const CsrMatrix& a, const DenseMatrix& b,
                             const KernelVariant& v, std::size_t workers = 0);

// Rows with degree >= hub_threshold are split over their nonzeros into
// fixed-size chunks with per-chunk partial accumulators reduced in chunk
// order; light rows follow the rowparallel path. Bitwise deterministic.
DenseMatrix spmm_hubsplit(const CsrMatrix& a, const DenseMatrix& b,
                          const KernelVariant& v, std::size_t workers = 0);

// Reference serial gather-dot: out[e] = <X[i,:], Y[j,:]> for the e-th
// stored entry (i,j). Pattern values are ignored.
std::vector<float> sddmm_baseline(const CsrMatrix& pattern, const DenseMatrix& x,
                                  const DenseMatrix& y);

// Row-chunked SDDMM with the same tiling/vectorization controls; a HubSplit
// mapping applies intra-row parallelism over heavy rows' nonzeros.
std::vector<float> sddmm_rowparallel(const CsrMatrix& pattern, const DenseMatrix& x,
                                     const DenseMatrix& y, const KernelVariant& v,
                                     std::size_t workers = 0);

// Numerically stable CSR row softmax: out_e = exp(v_e - max_row) / sum_row.
// Empty rows produce no entries; the pattern is unchanged. NaN propagates.
CsrMatrix row_softmax(const CsrMatrix& m, std::size_t workers = 0);

// Unified launcher: applies AUTOSAGE_FTILE / AUTOSAGE_WPB / AUTOSAGE_HUB_T
// env overrides, resolves the vec4 gate, routes to the mapped kernel, and
// records elapsed wall time.
KernelResult dispatch(const KernelVariant& v, const CsrMatrix& a, const DenseMatrix& b,
                      std::size_t workers = 0);
KernelResult dispatch(const KernelVariant& v, const CsrMatrix& pattern, const DenseMatrix& x,
                      const DenseMatrix& y, std::size_t workers = 0);

} // namespace autosage
