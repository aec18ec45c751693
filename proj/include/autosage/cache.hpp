#pragma once

#include "autosage/csr.hpp"
#include "autosage/kernels.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace autosage {

struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stable 64-bit FNV-1a hash over (n_rows, n_cols, nnz, rowptr, colind) as
// little-endian bytes. Values are excluded: schedules depend on structure
// only, so cache hits survive changing weights.
std::uint64_t graph_sig(const CsrMatrix& m);

struct ScheduleKey {
    std::string device_sig;
    std::uint64_t graph_sig = 0;
    std::size_t f = 0;
    Op op = Op::SpMM;

    auto operator<=>(const ScheduleKey&) const = default;
    std::string to_string() const;
};

struct CacheRecord {
    ScheduleKey key;
    std::string choice;  // "baseline" or a variant string
    double t_b = 0.0;
    double t_star = 0.0;
    double alpha = 0.0;
    std::uint64_t timestamp = 0;  // unix seconds, set at put time
    std::uint32_t schema_version = 1;
    std::string toolchain;

    bool operator==(const CacheRecord&) const = default;
};

std::string toolchain_tag();

// In-memory decision cache with line-delimited text persistence. One
// record per line, canonical key order on store, so cache logs diff
// cleanly and successive stores of the same contents are byte-identical.
class ScheduleCache {
public:
    std::optional<CacheRecord> get(const ScheduleKey& key) const;
    void put(const CacheRecord& rec);
    std::size_t size() const;
    std::vector<CacheRecord> snapshot() const;
    void clear();

    // Replaces in-memory contents. Unknown schema versions and malformed
    // lines are errors naming the line; records are never silently
    // dropped.
    void load(const std::string& path);
    void store(const std::string& path) const;

private:
    mutable std::mutex mu_;
    std::map<ScheduleKey, CacheRecord> records_;
};

// Serialized record line (tab-separated, fixed field order):
// schema_version, device_sig, graph_sig hex, F, op, choice, t_b, t_star,
// alpha, timestamp, toolchain. Doubles use shortest round-trip form.
std::string record_to_line(const CacheRecord& rec);
CacheRecord record_from_line(const std::string& line);

struct ReplayMiss : std::runtime_error {
    explicit ReplayMiss(const ScheduleKey& k);
    ScheduleKey key;
};

// Replay mode: decisions are served from the cache only, never probed.
// A miss falls back to baseline with a warning unless strict, which makes
// the miss an error.
struct ReplayPolicy {
    bool replay_only = false;
    bool strict = false;

    static ReplayPolicy from_env();  // AUTOSAGE_REPLAY_ONLY, AUTOSAGE_REPLAY_STRICT
};

} // namespace autosage
