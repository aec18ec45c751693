#include "autosage/csr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace autosage {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::size_t align_bytes)
    : n_rows_(rows), n_cols_(cols), align_bytes_(align_bytes == 0 ? 4 : align_bytes) {
    allocate();
}

void DenseMatrix::allocate() {
    const std::size_t n = n_rows_ * n_cols_;
    const std::size_t slack = align_bytes_ / sizeof(float) + 8;
    storage_.assign(n + slack, 0.0f);
    auto addr = reinterpret_cast<std::uintptr_t>(storage_.data());
    std::size_t off = 0;
    while ((addr + off * sizeof(float)) % align_bytes_ != 0) ++off;
    // When a sub-16B alignment is requested, make it exact so the vec4
    // eligibility gate actually sees an under-aligned pointer.
    if (align_bytes_ < 16) {
        while ((addr + off * sizeof(float)) % 16 == 0) off += align_bytes_ / sizeof(float);
    }
    offset_ = off;
}

std::size_t DenseMatrix::base_alignment() const {
    auto addr = reinterpret_cast<std::uintptr_t>(data());
    std::size_t a = 1;
    while (a < 65536 && addr % (a * 2) == 0) a *= 2;
    return a;
}

void DenseMatrix::fill(float v) {
    std::fill_n(data(), size(), v);
}

DenseMatrix::DenseMatrix(const DenseMatrix& other)
    : n_rows_(other.n_rows_), n_cols_(other.n_cols_), align_bytes_(other.align_bytes_) {
    allocate();
    std::copy_n(other.data(), size(), data());
}

DenseMatrix& DenseMatrix::operator=(const DenseMatrix& other) {
    if (this != &other) {
        n_rows_ = other.n_rows_;
        n_cols_ = other.n_cols_;
        align_bytes_ = other.align_bytes_;
        allocate();
        std::copy_n(other.data(), size(), data());
    }
    return *this;
}

bool DenseMatrix::values_equal(const DenseMatrix& other) const {
    if (n_rows_ != other.n_rows_ || n_cols_ != other.n_cols_) return false;
    return std::equal(data(), data() + size(), other.data());
}

std::optional<CsrViolation> validate(const CsrMatrix& m) {
    if (m.rowptr.size() != m.n_rows + 1) {
        return CsrViolation{"rowptr length", m.rowptr.size()};
    }
    if (m.rowptr[0] != 0) {
        return CsrViolation{"rowptr[0] nonzero", 0};
    }
    for (std::size_t i = 1; i <= m.n_rows; ++i) {
        if (m.rowptr[i] < m.rowptr[i - 1]) {
            return CsrViolation{"rowptr non-decreasing", i};
        }
    }
    if (m.rowptr[m.n_rows] != m.nnz()) {
        return CsrViolation{"rowptr/nnz mismatch", m.n_rows};
    }
    for (std::size_t e = 0; e < m.colind.size(); ++e) {
        if (m.colind[e] >= m.n_cols) {
            return CsrViolation{"colind out of range", e};
        }
    }
    for (std::size_t i = 0; i < m.n_rows; ++i) {
        for (offset_t e = m.rowptr[i] + 1; e < m.rowptr[i + 1]; ++e) {
            if (m.colind[e] <= m.colind[e - 1]) {
                return CsrViolation{"colind not strictly increasing", static_cast<std::size_t>(e)};
            }
        }
    }
    if (!m.val.empty() && m.val.size() != m.colind.size()) {
        return CsrViolation{"val length mismatch", m.val.size()};
    }
    return std::nullopt;
}

namespace {

// Nearest-rank quantile on a sorted array: rank = ceil(q*n), 1-based.
std::size_t nearest_rank(const std::vector<std::size_t>& sorted, double q) {
    if (sorted.empty()) return 0;
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    if (rank == 0) rank = 1;
    if (rank > sorted.size()) rank = sorted.size();
    return sorted[rank - 1];
}

} // namespace

GraphFeatures extract_features(const CsrMatrix& m, std::size_t hub_threshold) {
    GraphFeatures gf;
    gf.n_rows = m.n_rows;
    gf.n_cols = m.n_cols;
    gf.nnz = m.nnz();
    gf.hub_threshold = hub_threshold;
    if (m.n_rows == 0) return gf;

    std::vector<std::size_t> degrees(m.n_rows);
    std::size_t heavy = 0, empty = 0;
    for (std::size_t i = 0; i < m.n_rows; ++i) {
        degrees[i] = m.degree(i);
        if (degrees[i] >= hub_threshold) ++heavy;
        if (degrees[i] == 0) ++empty;
    }
    std::sort(degrees.begin(), degrees.end());

    gf.deg_p25 = nearest_rank(degrees, 0.25);
    gf.deg_p50 = nearest_rank(degrees, 0.50);
    gf.deg_p75 = nearest_rank(degrees, 0.75);
    gf.deg_p90 = nearest_rank(degrees, 0.90);
    gf.deg_p99 = nearest_rank(degrees, 0.99);
    gf.deg_max = degrees.back();
    gf.mean_degree = static_cast<double>(gf.nnz) / static_cast<double>(m.n_rows);
    gf.heavy_row_fraction = static_cast<double>(heavy) / static_cast<double>(m.n_rows);
    gf.empty_row_fraction = static_cast<double>(empty) / static_cast<double>(m.n_rows);
    return gf;
}

} // namespace autosage
