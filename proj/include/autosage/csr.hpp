#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace autosage {

using index_t = std::uint32_t;   // column indices
using offset_t = std::uint64_t;  // rowptr offsets

// Default degree above which a row counts as heavy. Far above the synthetic
// light degrees (32-64) and far below hub degrees (5000+). Overridable via
// AUTOSAGE_HUB_T at dispatch.
inline constexpr std::size_t kDefaultHubThreshold = 256;

// Canonical CSR: rowptr[0]=0, non-decreasing, rowptr[n_rows]=nnz; column
// indices strictly increasing within each row. `val` is either empty
// (pattern-only, implicit value 1.0) or has one entry per stored index.
// Immutable after construction by convention; safe to share across threads.
struct CsrMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<offset_t> rowptr{0};
    std::vector<index_t> colind;
    std::vector<float> val;

    std::size_t nnz() const { return colind.size(); }
    bool has_values() const { return !val.empty(); }

    std::size_t degree(std::size_t i) const {
        return static_cast<std::size_t>(rowptr[i + 1] - rowptr[i]);
    }
    std::span<const index_t> row_cols(std::size_t i) const {
        return {colind.data() + rowptr[i], static_cast<std::size_t>(rowptr[i + 1] - rowptr[i])};
    }
    std::span<const float> row_vals(std::size_t i) const {
        return {val.data() + rowptr[i], static_cast<std::size_t>(rowptr[i + 1] - rowptr[i])};
    }

    bool operator==(const CsrMatrix&) const = default;
};

// Row-major dense N x F matrix of f32. The backing buffer is over-allocated
// so the first element can be placed at a requested byte alignment; tests
// use this to construct deliberately under-aligned operands for the
// vectorization gate. Rows are contiguous with stride = n_cols.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, std::size_t align_bytes = 64);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t size() const { return n_rows_ * n_cols_; }

    float* data() { return storage_.data() + offset_; }
    const float* data() const { return storage_.data() + offset_; }

    float& at(std::size_t i, std::size_t f) { return data()[i * n_cols_ + f]; }
    float at(std::size_t i, std::size_t f) const { return data()[i * n_cols_ + f]; }

    std::span<const float> row(std::size_t i) const { return {data() + i * n_cols_, n_cols_}; }
    std::span<float> row(std::size_t i) { return {data() + i * n_cols_, n_cols_}; }

    // Largest power of two (capped at 65536) dividing the base address.
    std::size_t base_alignment() const;

    void fill(float v);

    DenseMatrix(const DenseMatrix& other);
    DenseMatrix& operator=(const DenseMatrix& other);
    DenseMatrix(DenseMatrix&&) noexcept = default;
    DenseMatrix& operator=(DenseMatrix&&) noexcept = default;

    bool values_equal(const DenseMatrix& other) const;

private:
    void allocate();

    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t align_bytes_ = 64;
    std::size_t offset_ = 0;  // in floats
    std::vector<float> storage_;
};

// Degree-distribution summary used by the cost model and shortlist.
// Quantiles are nearest-rank over the sorted degree array.
struct GraphFeatures {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::size_t nnz = 0;
    std::size_t deg_p25 = 0;
    std::size_t deg_p50 = 0;
    std::size_t deg_p75 = 0;
    std::size_t deg_p90 = 0;
    std::size_t deg_p99 = 0;
    std::size_t deg_max = 0;
    double mean_degree = 0.0;
    double heavy_row_fraction = 0.0;
    double empty_row_fraction = 0.0;
    std::size_t hub_threshold = kDefaultHubThreshold;  // threshold the heavy fraction was taken at
};

struct CsrViolation {
    std::string invariant;  // name of the first violated invariant
    std::size_t index = 0;  // offending position
};

// nullopt == all invariants hold. Violations are values, not errors.
std::optional<CsrViolation> validate(const CsrMatrix& m);

GraphFeatures extract_features(const CsrMatrix& m,
                               std::size_t hub_threshold = kDefaultHubThreshold);

} // namespace autosage
