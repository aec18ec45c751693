#pragma once

#include "autosage/csr.hpp"
#include "autosage/scheduler.hpp"

namespace autosage {

// Sparse attention forward pass over a CSR pattern:
//   scores = sddmm(pattern, q, k); p = row_softmax(scores); out = spmm(p, v)
// with each sub-op auto-scheduled under its own cache key. Pattern values
// are ignored. Rows with no neighbors produce zero output rows. No 1/sqrt(F)
// scale is applied; pre-scale q if needed. v's width may differ from q/k's.
struct AttentionRun {
    DenseMatrix output;
    ScheduleDecision sddmm_decision;
    ScheduleDecision spmm_decision;
};

AttentionRun attention_probe_breakdown(const CsrMatrix& pattern, const DenseMatrix& q,
                                       const DenseMatrix& k, const DenseMatrix& v,
                                       const ProbeConfig& cfg, const ScheduleContext& ctx);

DenseMatrix csr_attention_forward(const CsrMatrix& pattern, const DenseMatrix& q,
                                  const DenseMatrix& k, const DenseMatrix& v,
                                  const ProbeConfig& cfg, const ScheduleContext& ctx);

} // namespace autosage
