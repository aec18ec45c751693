#include "autosage/cost.hpp"

#include "autosage/generate.hpp"
#include "doctest.h"

#include <algorithm>

using namespace autosage;

namespace {

const DeviceProfile kDev = DeviceProfile::fixed(20e9, 40e9, 4, "test");

KernelVariant rowparallel(Op op) {
    KernelVariant v;
    v.op = op;
    v.mapping = Mapping::RowParallel;
    return v;
}

KernelVariant hubsplit(Op op) {
    KernelVariant v;
    v.op = op;
    v.mapping = Mapping::HubSplit;
    return v;
}

} // namespace

TEST_CASE("estimate is zero for empty graphs") {
    GraphFeatures gf;
    gf.n_rows = 100;
    gf.n_cols = 100;
    gf.nnz = 0;
    for (auto op : {Op::SpMM, Op::SDDMM}) {
        CHECK(estimate_cost(rowparallel(op), gf, 64, kDev) == 0.0);
        CHECK(estimate_cost(hubsplit(op), gf, 64, kDev) == 0.0);
    }
}

TEST_CASE("doubling F roughly doubles a bandwidth-bound estimate") {
    auto gf = extract_features(gen_er(2000, 0.004, 1));
    const double c64 = estimate_cost(rowparallel(Op::SpMM), gf, 64, kDev);
    const double c128 = estimate_cost(rowparallel(Op::SpMM), gf, 128, kDev);
    const double ratio = c128 / c64;
    CHECK(ratio >= 1.9);
    CHECK(ratio <= 2.1);
}

TEST_CASE("hub graphs penalize mappings without hub handling") {
    auto gf = extract_features(gen_hub_fixed(2000, 1, 500, 8, 2));
    const double hub = estimate_cost(hubsplit(Op::SpMM), gf, 64, kDev);
    const double row = estimate_cost(rowparallel(Op::SpMM), gf, 64, kDev);
    CHECK(hub < row);
}

TEST_CASE("uniform graphs carry no imbalance penalty") {
    auto gf = extract_features(gen_hub_fixed(400, 0, 0, 6, 3));  // every degree 6
    const double hub = estimate_cost(hubsplit(Op::SpMM), gf, 64, kDev);
    const double row = estimate_cost(rowparallel(Op::SpMM), gf, 64, kDev);
    CHECK(hub == doctest::Approx(row));
}

TEST_CASE("shortlist starts with rowparallel on uniform graphs") {
    auto gf = extract_features(gen_hub_fixed(400, 0, 0, 6, 4));
    auto list = shortlist(gf, 64, Op::SpMM, kDev);
    REQUIRE_FALSE(list.empty());
    CHECK(list.front().mapping == Mapping::RowParallel);
    CHECK(list.front().f_tile == 32);
    CHECK(list.front().vectorized);  // F=64 is eligible
    CHECK(list.front().rows_per_chunk == 1);
}

TEST_CASE("shortlist excludes vectorized candidates when F mod 4 != 0") {
    auto gf = extract_features(gen_er(500, 0.01, 5));
    auto list = shortlist(gf, 63, Op::SpMM, kDev);
    CHECK(list.size() == 18);  // mapping x tile x rpc, scalar only
    for (const auto& v : list) CHECK_FALSE(v.vectorized);

    auto with_vec = shortlist(gf, 64, Op::SpMM, kDev);
    CHECK(with_vec.size() == 36);
}

TEST_CASE("shortlist is deterministic and covers the grid") {
    auto gf = extract_features(gen_hub_fixed(1000, 1, 400, 5, 6));
    auto a = shortlist(gf, 128, Op::SDDMM, kDev);
    auto b = shortlist(gf, 128, Op::SDDMM, kDev);
    CHECK(a == b);
    for (const auto& v : a) {
        CHECK(v.op == Op::SDDMM);
        CHECK((v.mapping == Mapping::RowParallel || v.mapping == Mapping::HubSplit));
    }
    // skewed graph: hubsplit candidates shortlist ahead of rowparallel
    CHECK(a.front().mapping == Mapping::HubSplit);
}

TEST_CASE("shortlist order is invariant under common device scaling") {
    auto gf = extract_features(gen_hub_fixed(1000, 1, 400, 5, 7));
    const auto scaled = DeviceProfile::fixed(20e9 * 3.7, 40e9 * 3.7, 4, "test");
    CHECK(shortlist(gf, 64, Op::SpMM, kDev) == shortlist(gf, 64, Op::SpMM, scaled));
    CHECK(shortlist(gf, 63, Op::SDDMM, kDev) == shortlist(gf, 63, Op::SDDMM, scaled));
}
