#include "autosage/kernels.hpp"

#include "autosage/env.hpp"
#include "autosage/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace autosage {

namespace {

// Nonzeros per heavy-row piece in HubSplit. Fixed so the chunk
// decomposition (and hence float reduction order) does not depend on the
// worker count.
constexpr std::size_t kHubNnzChunk = 2048;

constexpr std::size_t kSoftmaxRowsPerChunk = 1024;

void check_variant(const KernelVariant& v) {
    if (v.f_tile == 0) throw std::invalid_argument("variant: f_tile must be > 0");
    if (v.rows_per_chunk == 0) throw std::invalid_argument("variant: rows_per_chunk must be > 0");
    if (v.mapping == Mapping::HubSplit && v.hub_threshold == 0) {
        throw std::invalid_argument("variant: hub_threshold must be > 0 for hubsplit");
    }
}

void check_spmm_dims(const CsrMatrix& a, const DenseMatrix& b) {
    if (a.n_cols != b.n_rows()) {
        throw std::invalid_argument("spmm: a.n_cols != b.n_rows");
    }
}

void check_sddmm_dims(const CsrMatrix& p, const DenseMatrix& x, const DenseMatrix& y) {
    if (x.n_cols() != y.n_cols()) throw std::invalid_argument("sddmm: x.n_cols != y.n_cols");
    if (x.n_rows() != p.n_rows) throw std::invalid_argument("sddmm: x.n_rows != pattern.n_rows");
    if (y.n_rows() != p.n_cols) throw std::invalid_argument("sddmm: y.n_rows != pattern.n_cols");
}

std::size_t effective_tile(std::size_t f_tile, std::size_t f) {
    return std::max<std::size_t>(1, std::min(f_tile, std::max<std::size_t>(f, 1)));
}

double* tile_scratch(std::size_t n) {
    thread_local std::vector<double> buf;
    if (buf.size() < n) buf.resize(n);
    return buf.data();
}

// Accumulates entries [e0,e1) of a sparse row times B into acc[0..fw),
// feature window starting at f0. The 4-lane path keeps the same
// per-feature accumulation order as the scalar path.
void accumulate_row_tile(const CsrMatrix& a, const float* bd, std::size_t f,
                         offset_t e0, offset_t e1, std::size_t f0, std::size_t fw,
                         bool vec, const float* vals, double* acc) {
    if (vec) {
        const std::size_t fw4 = fw & ~std::size_t{3};
        for (offset_t e = e0; e < e1; ++e) {
            const float* brow = bd + static_cast<std::size_t>(a.colind[e]) * f + f0;
            const double v = vals ? vals[e] : 1.0;
            std::size_t t = 0;
            for (; t < fw4; t += 4) {
                acc[t + 0] += v * brow[t + 0];
                acc[t + 1] += v * brow[t + 1];
                acc[t + 2] += v * brow[t + 2];
                acc[t + 3] += v * brow[t + 3];
            }
            for (; t < fw; ++t) acc[t] += v * brow[t];
        }
    } else {
        for (offset_t e = e0; e < e1; ++e) {
            const float* brow = bd + static_cast<std::size_t>(a.colind[e]) * f + f0;
            const double v = vals ? vals[e] : 1.0;
            for (std::size_t t = 0; t < fw; ++t) acc[t] += v * brow[t];
        }
    }
}

void spmm_row(const CsrMatrix& a, const float* bd, std::size_t f, std::size_t i,
              float* crow, std::size_t ft, bool vec, const float* vals, double* acc) {
    const offset_t e0 = a.rowptr[i];
    const offset_t e1 = a.rowptr[i + 1];
    for (std::size_t b0 = 0; b0 < f; b0 += ft) {
        const std::size_t fw = std::min(ft, f - b0);
        std::fill_n(acc, fw, 0.0);
        accumulate_row_tile(a, bd, f, e0, e1, b0, fw, vec, vals, acc);
        for (std::size_t t = 0; t < fw; ++t) crow[b0 + t] = static_cast<float>(acc[t]);
    }
}

struct HubPiece {
    std::size_t row;
    offset_t e0;
    offset_t e1;
    std::size_t scratch_off;  // in doubles; piece covers [off, off + F)
};

double sddmm_dot(const float* xr, const float* yr, std::size_t f, std::size_t ft, bool vec) {
    double acc = 0.0;
    for (std::size_t b0 = 0; b0 < f; b0 += ft) {
        const std::size_t fw = std::min(ft, f - b0);
        if (vec) {
            double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
            const std::size_t fw4 = fw & ~std::size_t{3};
            std::size_t t = 0;
            for (; t < fw4; t += 4) {
                a0 += static_cast<double>(xr[b0 + t + 0]) * yr[b0 + t + 0];
                a1 += static_cast<double>(xr[b0 + t + 1]) * yr[b0 + t + 1];
                a2 += static_cast<double>(xr[b0 + t + 2]) * yr[b0 + t + 2];
                a3 += static_cast<double>(xr[b0 + t + 3]) * yr[b0 + t + 3];
            }
            double tail = 0.0;
            for (; t < fw; ++t) tail += static_cast<double>(xr[b0 + t]) * yr[b0 + t];
            acc += ((a0 + a1) + (a2 + a3)) + tail;
        } else {
            for (std::size_t t = 0; t < fw; ++t) {
                acc += static_cast<double>(xr[b0 + t]) * yr[b0 + t];
            }
        }
    }
    return acc;
}

std::vector<HubPiece> make_hub_pieces(const CsrMatrix& a, const std::vector<std::size_t>& heavy,
                                      std::size_t f) {
    std::vector<HubPiece> pieces;
    std::size_t off = 0;
    for (auto i : heavy) {
        const offset_t e0 = a.rowptr[i];
        const offset_t e1 = a.rowptr[i + 1];
        for (offset_t p0 = e0; p0 < e1; p0 += kHubNnzChunk) {
            pieces.push_back({i, p0, std::min<offset_t>(p0 + kHubNnzChunk, e1), off});
            off += f;
        }
    }
    return pieces;
}

} // namespace

const char* to_string(Op op) {
    return op == Op::SpMM ? "spmm" : "sddmm";
}

const char* to_string(Mapping m) {
    switch (m) {
        case Mapping::Baseline: return "baseline";
        case Mapping::RowParallel: return "rowparallel";
        case Mapping::HubSplit: return "hubsplit";
    }
    return "?";
}

std::string variant_to_string(const KernelVariant& v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s:%s:ft=%zu:rpc=%zu:vec=%d:hubt=%zu",
                  to_string(v.op), to_string(v.mapping), v.f_tile, v.rows_per_chunk,
                  v.vectorized ? 1 : 0, v.hub_threshold);
    return buf;
}

KernelVariant variant_from_string(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(':', start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 6) throw std::invalid_argument("variant_from_string: bad format: " + s);

    KernelVariant v;
    if (parts[0] == "spmm") v.op = Op::SpMM;
    else if (parts[0] == "sddmm") v.op = Op::SDDMM;
    else throw std::invalid_argument("variant_from_string: bad op: " + parts[0]);

    if (parts[1] == "baseline") v.mapping = Mapping::Baseline;
    else if (parts[1] == "rowparallel") v.mapping = Mapping::RowParallel;
    else if (parts[1] == "hubsplit") v.mapping = Mapping::HubSplit;
    else throw std::invalid_argument("variant_from_string: bad mapping: " + parts[1]);

    auto num = [&](const std::string& p, const char* prefix) -> std::size_t {
        const std::size_t n = std::strlen(prefix);
        if (p.compare(0, n, prefix) != 0) {
            throw std::invalid_argument("variant_from_string: expected " + std::string(prefix));
        }
        return static_cast<std::size_t>(std::stoull(p.substr(n)));
    };
    v.f_tile = num(parts[2], "ft=");
    v.rows_per_chunk = num(parts[3], "rpc=");
    v.vectorized = num(parts[4], "vec=") != 0;
    v.hub_threshold = num(parts[5], "hubt=");
    return v;
}

bool vec4_eligible(std::size_t f, std::initializer_list<const DenseMatrix*> dense) {
    if (f % 4 != 0 || f == 0) return false;
    for (const auto* d : dense) {
        if (d->base_alignment() % 16 != 0) return false;
    }
    return true;
}

DenseMatrix spmm_baseline(const CsrMatrix& a, const DenseMatrix& b) {
    check_spmm_dims(a, b);
    const std::size_t f = b.n_cols();
    DenseMatrix c(a.n_rows, f);
    const float* bd = b.data();
    const float* vals = a.has_values() ? a.val.data() : nullptr;
    std::vector<double> acc(std::max<std::size_t>(f, 1));
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        std::fill_n(acc.data(), f, 0.0);
        for (offset_t e = a.rowptr[i]; e < a.rowptr[i + 1]; ++e) {
            const float* brow = bd + static_cast<std::size_t>(a.colind[e]) * f;
            const double v = vals ? vals[e] : 1.0;
            for (std::size_t t = 0; t < f; ++t) acc[t] += v * brow[t];
        }
        float* crow = c.data() + i * f;
        for (std::size_t t = 0; t < f; ++t) crow[t] = static_cast<float>(acc[t]);
    }
    return c;
}

DenseMatrix spmm_rowparallel(const CsrMatrix& a, const DenseMatrix& b,
                             const KernelVariant& v, std::size_t workers) {
    check_spmm_dims(a, b);
    check_variant(v);
    if (v.mapping != Mapping::RowParallel) {
        throw std::invalid_argument("spmm_rowparallel: variant mapping mismatch");
    }
    const std::size_t f = b.n_cols();
    DenseMatrix c(a.n_rows, f);
    if (a.n_rows == 0 || f == 0) return c;

    const std::size_t ft = effective_tile(v.f_tile, f);
    const bool vec = v.vectorized && vec4_eligible(f, {&b});
    const std::size_t rpc = v.rows_per_chunk;
    const std::size_t n_chunks = (a.n_rows + rpc - 1) / rpc;
    const float* bd = b.data();
    const float* vals = a.has_values() ? a.val.data() : nullptr;
    float* cd = c.data();

    parallel_for(n_chunks, workers, [&](std::size_t t) {
        const std::size_t r0 = t * rpc;
        const std::size_t r1 = std::min(r0 + rpc, a.n_rows);
        double* acc = tile_scratch(ft);
        for (std::size_t i = r0; i < r1; ++i) {
            spmm_row(a, bd, f, i, cd + i * f, ft, vec, vals, acc);
        }
    });
    return c;
}

DenseMatrix spmm_hubsplit(const CsrMatrix& a, const DenseMatrix& b,
                          const KernelVariant& v, std::size_t workers) {
    check_spmm_dims(a, b);
    check_variant(v);
    if (v.mapping != Mapping::HubSplit) {
        throw std::invalid_argument("spmm_hubsplit: variant mapping mismatch");
    }
    const std::size_t f = b.n_cols();
    DenseMatrix c(a.n_rows, f);
    if (a.n_rows == 0 || f == 0) return c;

    std::vector<std::size_t> heavy;
    std::vector<std::size_t> light;
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        (a.degree(i) >= v.hub_threshold ? heavy : light).push_back(i);
    }

    const std::size_t ft = effective_tile(v.f_tile, f);
    const bool vec = v.vectorized && vec4_eligible(f, {&b});
    const std::size_t rpc = v.rows_per_chunk;
    const float* bd = b.data();
    const float* vals = a.has_values() ? a.val.data() : nullptr;
    float* cd = c.data();

    const auto pieces = make_hub_pieces(a, heavy, f);
    std::vector<double> scratch(pieces.size() * f);
    const std::size_t n_light_chunks = light.empty() ? 0 : (light.size() + rpc - 1) / rpc;

    // Phase 1: light row chunks plus heavy-row nnz pieces.
    parallel_for(n_light_chunks + pieces.size(), workers, [&](std::size_t t) {
        double* acc = tile_scratch(ft);
        if (t < n_light_chunks) {
            const std::size_t k0 = t * rpc;
            const std::size_t k1 = std::min(k0 + rpc, light.size());
            for (std::size_t k = k0; k < k1; ++k) {
                const std::size_t i = light[k];
                spmm_row(a, bd, f, i, cd + i * f, ft, vec, vals, acc);
            }
        } else {
            const HubPiece& p = pieces[t - n_light_chunks];
            double* dst = scratch.data() + p.scratch_off;
            for (std::size_t b0 = 0; b0 < f; b0 += ft) {
                const std::size_t fw = std::min(ft, f - b0);
                std::fill_n(acc, fw, 0.0);
                accumulate_row_tile(a, bd, f, p.e0, p.e1, b0, fw, vec, vals, acc);
                for (std::size_t q = 0; q < fw; ++q) dst[b0 + q] = acc[q];
            }
        }
    });

    // Phase 2: reduce each heavy row's partials in fixed piece order.
    if (!heavy.empty()) {
        // pieces are grouped by row in order; find each row's piece range
        std::vector<std::pair<std::size_t, std::size_t>> ranges(heavy.size());
        std::size_t p = 0;
        for (std::size_t h = 0; h < heavy.size(); ++h) {
            const std::size_t begin = p;
            while (p < pieces.size() && pieces[p].row == heavy[h]) ++p;
            ranges[h] = {begin, p};
        }
        parallel_for(heavy.size(), workers, [&](std::size_t h) {
            const std::size_t i = heavy[h];
            float* crow = cd + i * f;
            const auto [p0, p1] = ranges[h];
            for (std::size_t q = 0; q < f; ++q) {
                double s = 0.0;
                for (std::size_t pi = p0; pi < p1; ++pi) {
                    s += scratch[pieces[pi].scratch_off + q];
                }
                crow[q] = static_cast<float>(s);
            }
        });
    }
    return c;
}

std::vector<float> sddmm_baseline(const CsrMatrix& pattern, const DenseMatrix& x,
                                  const DenseMatrix& y) {
    check_sddmm_dims(pattern, x, y);
    const std::size_t f = x.n_cols();
    std::vector<float> out(pattern.nnz());
    const float* xd = x.data();
    const float* yd = y.data();
    for (std::size_t i = 0; i < pattern.n_rows; ++i) {
        const float* xr = xd + i * f;
        for (offset_t e = pattern.rowptr[i]; e < pattern.rowptr[i + 1]; ++e) {
            const float* yr = yd + static_cast<std::size_t>(pattern.colind[e]) * f;
            double acc = 0.0;
            for (std::size_t t = 0; t < f; ++t) {
                acc += static_cast<double>(xr[t]) * yr[t];
            }
            out[e] = static_cast<float>(acc);
        }
    }
    return out;
}

std::vector<float> sddmm_rowparallel(const CsrMatrix& pattern, const DenseMatrix& x,
                                     const DenseMatrix& y, const KernelVariant& v,
                                     std::size_t workers) {
    check_sddmm_dims(pattern, x, y);
    check_variant(v);
    if (v.mapping == Mapping::Baseline) {
        throw std::invalid_argument("sddmm_rowparallel: variant mapping mismatch");
    }
    const std::size_t f = x.n_cols();
    std::vector<float> out(pattern.nnz());
    if (pattern.nnz() == 0) return out;

    const std::size_t ft = effective_tile(v.f_tile, f);
    const bool vec = v.vectorized && vec4_eligible(f, {&x, &y});
    const std::size_t rpc = v.rows_per_chunk;
    const float* xd = x.data();
    const float* yd = y.data();

    auto run_rows = [&](const std::size_t* rows, std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t i = rows[k];
            const float* xr = xd + i * f;
            for (offset_t e = pattern.rowptr[i]; e < pattern.rowptr[i + 1]; ++e) {
                const float* yr = yd + static_cast<std::size_t>(pattern.colind[e]) * f;
                out[e] = static_cast<float>(sddmm_dot(xr, yr, f, ft, vec));
            }
        }
    };

    if (v.mapping == Mapping::RowParallel) {
        const std::size_t n_chunks = (pattern.n_rows + rpc - 1) / rpc;
        parallel_for(n_chunks, workers, [&](std::size_t t) {
            const std::size_t r0 = t * rpc;
            const std::size_t r1 = std::min(r0 + rpc, pattern.n_rows);
            for (std::size_t i = r0; i < r1; ++i) run_rows(&i, 1);
        });
        return out;
    }

    // HubSplit: heavy rows become independent nnz-range pieces.
    std::vector<std::size_t> heavy;
    std::vector<std::size_t> light;
    for (std::size_t i = 0; i < pattern.n_rows; ++i) {
        (pattern.degree(i) >= v.hub_threshold ? heavy : light).push_back(i);
    }
    struct Piece {
        std::size_t row;
        offset_t e0;
        offset_t e1;
    };
    std::vector<Piece> pieces;
    for (auto i : heavy) {
        for (offset_t p0 = pattern.rowptr[i]; p0 < pattern.rowptr[i + 1]; p0 += kHubNnzChunk) {
            pieces.push_back({i, p0, std::min<offset_t>(p0 + kHubNnzChunk, pattern.rowptr[i + 1])});
        }
    }
    const std::size_t n_light_chunks = light.empty() ? 0 : (light.size() + rpc - 1) / rpc;
    parallel_for(n_light_chunks + pieces.size(), workers, [&](std::size_t t) {
        if (t < n_light_chunks) {
            const std::size_t k0 = t * rpc;
            const std::size_t k1 = std::min(k0 + rpc, light.size());
            run_rows(light.data() + k0, k1 - k0);
        } else {
            const Piece& p = pieces[t - n_light_chunks];
            const float* xr = xd + p.row * f;
            for (offset_t e = p.e0; e < p.e1; ++e) {
                const float* yr = yd + static_cast<std::size_t>(pattern.colind[e]) * f;
                out[e] = static_cast<float>(sddmm_dot(xr, yr, f, ft, vec));
            }
        }
    });
    return out;
}

CsrMatrix row_softmax(const CsrMatrix& m, std::size_t workers) {
    if (m.nnz() > 0 && !m.has_values()) {
        throw std::invalid_argument("row_softmax: values required");
    }
    CsrMatrix out = m;
    if (m.nnz() == 0 || m.n_rows == 0) return out;

    const std::size_t n_chunks = (m.n_rows + kSoftmaxRowsPerChunk - 1) / kSoftmaxRowsPerChunk;
    parallel_for(n_chunks, workers, [&](std::size_t t) {
        const std::size_t r0 = t * kSoftmaxRowsPerChunk;
        const std::size_t r1 = std::min(r0 + kSoftmaxRowsPerChunk, m.n_rows);
        for (std::size_t i = r0; i < r1; ++i) {
            const offset_t e0 = m.rowptr[i];
            const offset_t e1 = m.rowptr[i + 1];
            if (e0 == e1) continue;
            float mx = m.val[e0];
            for (offset_t e = e0 + 1; e < e1; ++e) mx = std::max(mx, m.val[e]);
            double sum = 0.0;
            for (offset_t e = e0; e < e1; ++e) {
                const float ex = static_cast<float>(
                    std::exp(static_cast<double>(m.val[e]) - static_cast<double>(mx)));
                out.val[e] = ex;
                sum += static_cast<double>(ex);
            }
            for (offset_t e = e0; e < e1; ++e) {
                out.val[e] = static_cast<float>(static_cast<double>(out.val[e]) / sum);
            }
        }
    });
    return out;
}

namespace {

KernelVariant apply_env_overrides(KernelVariant v) {
    if (auto ft = env::get_int("AUTOSAGE_FTILE"); ft && *ft > 0) {
        v.f_tile = static_cast<std::size_t>(*ft);
    }
    if (auto w = env::get_int("AUTOSAGE_WPB"); w && *w > 0) {
        v.rows_per_chunk = static_cast<std::size_t>(*w);
    }
    if (auto h = env::get_int("AUTOSAGE_HUB_T"); h && *h > 0) {
        v.hub_threshold = static_cast<std::size_t>(*h);
    }
    return v;
}

double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

KernelResult dispatch(const KernelVariant& v, const CsrMatrix& a, const DenseMatrix& b,
                      std::size_t workers) {
    if (v.op != Op::SpMM) {
        throw std::invalid_argument("dispatch: spmm operands given to a non-spmm variant");
    }
    check_spmm_dims(a, b);
    KernelResult r;
    r.variant = apply_env_overrides(v);
    check_variant(r.variant);
    const bool vec = r.variant.vectorized && vec4_eligible(b.n_cols(), {&b});
    const auto t0 = std::chrono::steady_clock::now();
    switch (r.variant.mapping) {
        case Mapping::Baseline:
            r.output = spmm_baseline(a, b);
            break;
        case Mapping::RowParallel:
            r.output = spmm_rowparallel(a, b, r.variant, workers);
            break;
        case Mapping::HubSplit:
            r.output = spmm_hubsplit(a, b, r.variant, workers);
            break;
    }
    r.elapsed_ms = elapsed_ms_since(t0);
    r.vectorized_path = vec && r.variant.mapping != Mapping::Baseline;
    return r;
}

KernelResult dispatch(const KernelVariant& v, const CsrMatrix& pattern, const DenseMatrix& x,
                      const DenseMatrix& y, std::size_t workers) {
    if (v.op != Op::SDDMM) {
        throw std::invalid_argument("dispatch: sddmm operands given to a non-sddmm variant");
    }
    check_sddmm_dims(pattern, x, y);
    KernelResult r;
    r.variant = apply_env_overrides(v);
    check_variant(r.variant);
    const bool vec = r.variant.vectorized && vec4_eligible(x.n_cols(), {&x, &y});
    const auto t0 = std::chrono::steady_clock::now();
    if (r.variant.mapping == Mapping::Baseline) {
        r.values = sddmm_baseline(pattern, x, y);
    } else {
        r.values = sddmm_rowparallel(pattern, x, y, r.variant, workers);
    }
    r.elapsed_ms = elapsed_ms_since(t0);
    r.vectorized_path = vec && r.variant.mapping != Mapping::Baseline;
    return r;
}

} // namespace autosage
