#pragma once

#include "autosage/csr.hpp"

#include <cstdint>
#include <vector>

namespace autosage {

// Erdos-Renyi: each off-diagonal entry present independently with
// probability p. Built per row as a binomial degree draw plus distinct
// uniform columns (O(nnz), statistically equivalent to n^2 Bernoulli
// trials). Values uniform in [0,1). Deterministic for a fixed seed.
CsrMatrix gen_er(std::size_t n, double p, std::uint64_t seed);

// ceil(h*n) uniformly chosen rows get degree k*hub_factor, the rest degree
// k; columns uniform distinct. Degrees above n are clamped.
CsrMatrix gen_hubskew(std::size_t n, std::size_t k, double h,
                      std::uint64_t seed, std::size_t hub_factor = 64);

// First num_hubs rows get exactly hub_deg entries, the rest other_deg.
CsrMatrix gen_hub_fixed(std::size_t n, std::size_t num_hubs, std::size_t hub_deg,
                        std::size_t other_deg, std::uint64_t seed);

// Degree-stratified systematic sample: rows sorted by degree descending
// (ties by index), every floor(n_rows/s)-th row taken, where
// s = min(n_rows, max(min_rows, ceil(frac*n_rows))). Selection is
// deterministic; the seed parameter is accepted for interface stability
// and ignored. Returned indices are in degree-descending order.
std::vector<std::size_t> sample_row_indices(const CsrMatrix& m, double frac,
                                            std::size_t min_rows);

// Row slice of m at `rows` (in order), preserving original column indices
// so column-indexed dense operands are reused unchanged.
CsrMatrix slice_rows(const CsrMatrix& m, const std::vector<std::size_t>& rows);

CsrMatrix induced_row_sample(const CsrMatrix& m, double frac, std::size_t min_rows,
                             std::uint64_t seed = 0);

} // namespace autosage
