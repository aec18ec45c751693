#include "autosage/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace autosage {

namespace {

// Floyd's sampling: k distinct values from [0, m), sorted ascending.
std::vector<index_t> sample_distinct(std::size_t k, std::size_t m, std::mt19937_64& rng) {
    std::vector<index_t> out;
    if (k == 0 || m == 0) return out;
    if (k >= m) {
        out.resize(m);
        std::iota(out.begin(), out.end(), index_t{0});
        return out;
    }
    std::unordered_set<index_t> seen;
    seen.reserve(k * 2);
    out.reserve(k);
    for (std::size_t j = m - k; j < m; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        auto t = static_cast<index_t>(pick(rng));
        if (seen.count(t)) {
            seen.insert(static_cast<index_t>(j));
            out.push_back(static_cast<index_t>(j));
        } else {
            seen.insert(t);
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CsrMatrix from_degrees(std::size_t n, const std::vector<std::size_t>& degrees,
                       std::mt19937_64& rng) {
    CsrMatrix m;
    m.n_rows = n;
    m.n_cols = n;
    m.rowptr.assign(n + 1, 0);
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < n; ++i) {
        nnz += degrees[i];
        m.rowptr[i + 1] = nnz;
    }
    m.colind.reserve(nnz);
    m.val.reserve(nnz);
    std::uniform_real_distribution<float> value(0.0f, 1.0f);
    for (std::size_t i = 0; i < n; ++i) {
        auto cols = sample_distinct(degrees[i], n, rng);
        for (auto c : cols) {
            m.colind.push_back(c);
            m.val.push_back(value(rng));
        }
    }
    return m;
}

} // namespace

CsrMatrix gen_er(std::size_t n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_er: p must be in [0,1]");
    CsrMatrix m;
    m.n_rows = n;
    m.n_cols = n;
    m.rowptr.assign(n + 1, 0);
    if (n == 0) {
        m.rowptr = {0};
        return m;
    }
    std::mt19937_64 rng(seed);
    std::binomial_distribution<std::size_t> degree_draw(n - 1, p);
    std::uniform_real_distribution<float> value(0.0f, 1.0f);
    std::size_t nnz = 0;
    std::vector<std::size_t> degrees(n);
    for (std::size_t i = 0; i < n; ++i) {
        degrees[i] = (n > 1 && p > 0.0) ? degree_draw(rng) : 0;
        nnz += degrees[i];
        m.rowptr[i + 1] = nnz;
    }
    m.colind.reserve(nnz);
    m.val.reserve(nnz);
    for (std::size_t i = 0; i < n; ++i) {
        // sample from [0, n-2] then skip the diagonal
        auto cols = sample_distinct(degrees[i], n - 1, rng);
        for (auto c : cols) {
            m.colind.push_back(c >= static_cast<index_t>(i) ? c + 1 : c);
            m.val.push_back(value(rng));
        }
    }
    return m;
}

CsrMatrix gen_hubskew(std::size_t n, std::size_t k, double h,
                      std::uint64_t seed, std::size_t hub_factor) {
    if (h < 0.0 || h > 1.0) throw std::invalid_argument("gen_hubskew: h must be in [0,1]");
    std::mt19937_64 rng(seed);
    const std::size_t num_hubs = static_cast<std::size_t>(std::ceil(h * static_cast<double>(n)));
    const std::size_t hub_deg = std::min(k * hub_factor, n);
    const std::size_t base_deg = std::min(k, n);

    // uniformly chosen hub rows via partial Fisher-Yates
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<bool> is_hub(n, false);
    for (std::size_t i = 0; i < num_hubs && i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
        is_hub[order[i]] = true;
    }

    std::vector<std::size_t> degrees(n);
    for (std::size_t i = 0; i < n; ++i) degrees[i] = is_hub[i] ? hub_deg : base_deg;
    return from_degrees(n, degrees, rng);
}

CsrMatrix gen_hub_fixed(std::size_t n, std::size_t num_hubs, std::size_t hub_deg,
                        std::size_t other_deg, std::uint64_t seed) {
    if (hub_deg > n || other_deg > n) {
        throw std::invalid_argument("gen_hub_fixed: degree exceeds n");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> degrees(n);
    for (std::size_t i = 0; i < n; ++i) degrees[i] = i < num_hubs ? hub_deg : other_deg;
    return from_degrees(n, degrees, rng);
}

std::vector<std::size_t> sample_row_indices(const CsrMatrix& m, double frac,
                                            std::size_t min_rows) {
    if (frac <= 0.0 || frac > 1.0) throw std::invalid_argument("sample: frac must be in (0,1]");
    std::vector<std::size_t> rows;
    if (m.n_rows == 0) return rows;
    std::size_t s = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(m.n_rows)));
    s = std::max(s, min_rows);
    s = std::min(s, m.n_rows);

    std::vector<std::size_t> order(m.n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return m.degree(a) > m.degree(b);
    });

    const std::size_t stride = std::max<std::size_t>(1, m.n_rows / s);
    rows.reserve(s);
    for (std::size_t r = 0; r < s; ++r) rows.push_back(order[r * stride]);
    return rows;
}

CsrMatrix slice_rows(const CsrMatrix& m, const std::vector<std::size_t>& rows) {
    CsrMatrix out;
    out.n_rows = rows.size();
    out.n_cols = m.n_cols;
    out.rowptr.assign(rows.size() + 1, 0);
    std::size_t nnz = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        nnz += m.degree(rows[r]);
        out.rowptr[r + 1] = nnz;
    }
    out.colind.reserve(nnz);
    if (m.has_values()) out.val.reserve(nnz);
    for (auto i : rows) {
        auto cols = m.row_cols(i);
        out.colind.insert(out.colind.end(), cols.begin(), cols.end());
        if (m.has_values()) {
            auto vals = m.row_vals(i);
            out.val.insert(out.val.end(), vals.begin(), vals.end());
        }
    }
    return out;
}

CsrMatrix induced_row_sample(const CsrMatrix& m, double frac, std::size_t min_rows,
                             std::uint64_t /*seed*/) {
    return slice_rows(m, sample_row_indices(m, frac, min_rows));
}

} // namespace autosage
