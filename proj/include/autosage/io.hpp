#pragma once

#include "autosage/csr.hpp"

#include <stdexcept>
#include <string>

namespace autosage {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary CSR container, little-endian:
//   magic "ASCR", u32 version=1, u64 n_rows, u64 n_cols, u64 nnz,
//   u8 has_values, rowptr u64[n_rows+1], colind u32[nnz],
//   then val f32[nnz] when has_values=1.
// load(save(m)) == m bitwise. Loading rejects invariant violations
// (including unsorted columns) instead of repairing them.
void save_csr(const CsrMatrix& m, const std::string& path);
CsrMatrix load_csr(const std::string& path);

} // namespace autosage
