#include "autosage/attention.hpp"

#include "autosage/kernels.hpp"

#include <stdexcept>

namespace autosage {

AttentionRun attention_probe_breakdown(const CsrMatrix& pattern, const DenseMatrix& q,
                                       const DenseMatrix& k, const DenseMatrix& v,
                                       const ProbeConfig& cfg, const ScheduleContext& ctx) {
    if (q.n_cols() != k.n_cols()) {
        throw std::invalid_argument("attention: q.n_cols != k.n_cols");
    }
    if (q.n_rows() != pattern.n_rows || k.n_rows() != pattern.n_cols ||
        v.n_rows() != pattern.n_cols) {
        throw std::invalid_argument("attention: operand row counts incompatible with pattern");
    }

    AttentionRun run;
    run.sddmm_decision = decide_sddmm(pattern, q, k, cfg, ctx);
    std::vector<float> scores =
        run.sddmm_decision.choice
            ? dispatch(*run.sddmm_decision.choice, pattern, q, k, ctx.workers).values
            : sddmm_baseline(pattern, q, k);

    CsrMatrix scored;
    scored.n_rows = pattern.n_rows;
    scored.n_cols = pattern.n_cols;
    scored.rowptr = pattern.rowptr;
    scored.colind = pattern.colind;
    scored.val = std::move(scores);
    const CsrMatrix p = row_softmax(scored, ctx.workers);

    run.spmm_decision = decide_spmm(p, v, cfg, ctx);
    run.output = run.spmm_decision.choice
                     ? dispatch(*run.spmm_decision.choice, p, v, ctx.workers).output
                     : spmm_baseline(p, v);
    return run;
}

DenseMatrix csr_attention_forward(const CsrMatrix& pattern, const DenseMatrix& q,
                                  const DenseMatrix& k, const DenseMatrix& v,
                                  const ProbeConfig& cfg, const ScheduleContext& ctx) {
    return attention_probe_breakdown(pattern, q, k, v, cfg, ctx).output;
}

} // namespace autosage
