#include "autosage/cache.hpp"

#include "autosage/env.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace autosage {

namespace {

static_assert(std::endian::native == std::endian::little,
              "graph_sig hashes little-endian bytes; add byte swapping for this platform");

struct Fnv1a {
    std::uint64_t h = 14695981039346656037ULL;

    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
};

std::string double_to_text(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw CacheError("cache: cannot format double");
    return std::string(buf, end);
}

double double_from_text(const std::string& s, const char* field) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw CacheError(std::string("cache: bad ") + field + ": " + s);
    }
    return v;
}

std::uint64_t u64_from_text(const std::string& s, const char* field, int base = 10) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw CacheError(std::string("cache: bad ") + field + ": " + s);
    }
    return v;
}

// device_sig is free text; tabs and newlines would break the line format
std::string sanitize(std::string s) {
    for (auto& c : s) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

} // namespace

std::uint64_t graph_sig(const CsrMatrix& m) {
    Fnv1a fnv;
    fnv.u64(m.n_rows);
    fnv.u64(m.n_cols);
    fnv.u64(m.nnz());
    fnv.bytes(m.rowptr.data(), m.rowptr.size() * sizeof(offset_t));
    fnv.bytes(m.colind.data(), m.colind.size() * sizeof(index_t));
    return fnv.h;
}

std::string ScheduleKey::to_string() const {
    char sig[32];
    std::snprintf(sig, sizeof sig, "%016llx", static_cast<unsigned long long>(graph_sig));
    return "(" + device_sig + ", " + sig + ", F=" + std::to_string(f) + ", " +
           autosage::to_string(op) + ")";
}

std::string toolchain_tag() {
    char buf[64];
#if defined(__clang__)
    std::snprintf(buf, sizeof buf, "clang-%d.%d.%d", __clang_major__, __clang_minor__,
                  __clang_patchlevel__);
#elif defined(__GNUC__)
    std::snprintf(buf, sizeof buf, "gcc-%d.%d.%d", __GNUC__, __GNUC_MINOR__,
                  __GNUC_PATCHLEVEL__);
#else
    std::snprintf(buf, sizeof buf, "unknown");
#endif
    return buf;
}

std::string record_to_line(const CacheRecord& rec) {
    char sig[32];
    std::snprintf(sig, sizeof sig, "%016llx", static_cast<unsigned long long>(rec.key.graph_sig));
    std::string line;
    line += std::to_string(rec.schema_version);
    line += '\t';
    line += sanitize(rec.key.device_sig);
    line += '\t';
    line += sig;
    line += '\t';
    line += std::to_string(rec.key.f);
    line += '\t';
    line += to_string(rec.key.op);
    line += '\t';
    line += rec.choice;
    line += '\t';
    line += double_to_text(rec.t_b);
    line += '\t';
    line += double_to_text(rec.t_star);
    line += '\t';
    line += double_to_text(rec.alpha);
    line += '\t';
    line += std::to_string(rec.timestamp);
    line += '\t';
    line += sanitize(rec.toolchain);
    return line;
}

CacheRecord record_from_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (fields.size() != 11) {
        throw CacheError("cache: expected 11 fields, got " + std::to_string(fields.size()));
    }
    CacheRecord rec;
    rec.schema_version = static_cast<std::uint32_t>(u64_from_text(fields[0], "schema_version"));
    if (rec.schema_version != 1) {
        throw CacheError("cache: unknown schema_version " + fields[0]);
    }
    rec.key.device_sig = fields[1];
    rec.key.graph_sig = u64_from_text(fields[2], "graph_sig", 16);
    rec.key.f = static_cast<std::size_t>(u64_from_text(fields[3], "F"));
    if (fields[4] == "spmm") rec.key.op = Op::SpMM;
    else if (fields[4] == "sddmm") rec.key.op = Op::SDDMM;
    else throw CacheError("cache: bad op: " + fields[4]);
    rec.choice = fields[5];
    if (rec.choice != "baseline") {
        variant_from_string(rec.choice);  // reject malformed choices now, not at use
    }
    rec.t_b = double_from_text(fields[6], "t_b");
    rec.t_star = double_from_text(fields[7], "t_star");
    rec.alpha = double_from_text(fields[8], "alpha");
    rec.timestamp = u64_from_text(fields[9], "timestamp");
    rec.toolchain = fields[10];
    return rec;
}

std::optional<CacheRecord> ScheduleCache::get(const ScheduleKey& key) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = records_.find(key);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void ScheduleCache::put(const CacheRecord& rec) {
    std::lock_guard<std::mutex> lk(mu_);
    records_[rec.key] = rec;
}

std::size_t ScheduleCache::size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return records_.size();
}

std::vector<CacheRecord> ScheduleCache::snapshot() const {
    std::lock_guard<std::mutex> lk(mu_);
    std::vector<CacheRecord> out;
    out.reserve(records_.size());
    for (const auto& [key, rec] : records_) out.push_back(rec);
    return out;
}

void ScheduleCache::clear() {
    std::lock_guard<std::mutex> lk(mu_);
    records_.clear();
}

void ScheduleCache::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CacheError("cache: cannot open " + path);
    std::map<ScheduleKey, CacheRecord> loaded;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            CacheRecord rec = record_from_line(line);
            loaded[rec.key] = rec;
        } catch (const std::exception& e) {
            throw CacheError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    records_ = std::move(loaded);
}

void ScheduleCache::store(const std::string& path) const {
    std::lock_guard<std::mutex> lk(mu_);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw CacheError("cache: cannot open " + path + " for writing");
    for (const auto& [key, rec] : records_) {
        f << record_to_line(rec) << '\n';
    }
    if (!f) throw CacheError("cache: write failed for " + path);
}

ReplayMiss::ReplayMiss(const ScheduleKey& k)
    : std::runtime_error("replay miss for key " + k.to_string()), key(k) {}

ReplayPolicy ReplayPolicy::from_env() {
    ReplayPolicy p;
    p.replay_only = env::get_flag("AUTOSAGE_REPLAY_ONLY");
    p.strict = env::get_flag("AUTOSAGE_REPLAY_STRICT");
    return p;
}

} // namespace autosage
