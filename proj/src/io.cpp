#include "autosage/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace autosage {

namespace {

constexpr char kMagic[4] = {'A', 'S', 'C', 'R'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "on-disk format is little-endian; add byte swapping for this platform");

template <typename T>
void write_pod(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void write_array(std::ofstream& f, const std::vector<T>& v) {
    f.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T read_pod(std::ifstream& f, const char* field) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw IoError(std::string("load_csr: truncated ") + field);
    return v;
}

template <typename T>
std::vector<T> read_array(std::ifstream& f, std::size_t n, const char* field) {
    std::vector<T> v(n);
    f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!f) throw IoError(std::string("load_csr: truncated ") + field);
    return v;
}

} // namespace

void save_csr(const CsrMatrix& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("save_csr: cannot open " + path);
    f.write(kMagic, 4);
    write_pod(f, kVersion);
    write_pod(f, static_cast<std::uint64_t>(m.n_rows));
    write_pod(f, static_cast<std::uint64_t>(m.n_cols));
    write_pod(f, static_cast<std::uint64_t>(m.nnz()));
    write_pod(f, static_cast<std::uint8_t>(m.has_values() ? 1 : 0));
    write_array(f, m.rowptr);
    write_array(f, m.colind);
    if (m.has_values()) write_array(f, m.val);
    if (!f) throw IoError("save_csr: write failed for " + path);
}

CsrMatrix load_csr(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("load_csr: cannot open " + path);

    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("load_csr: bad magic in " + path);
    }
    auto version = read_pod<std::uint32_t>(f, "version");
    if (version != kVersion) {
        throw IoError("load_csr: unsupported version " + std::to_string(version));
    }
    auto n_rows = read_pod<std::uint64_t>(f, "n_rows");
    auto n_cols = read_pod<std::uint64_t>(f, "n_cols");
    auto nnz = read_pod<std::uint64_t>(f, "nnz");
    auto has_values = read_pod<std::uint8_t>(f, "has_values");
    if (has_values > 1) throw IoError("load_csr: bad has_values flag");

    CsrMatrix m;
    m.n_rows = n_rows;
    m.n_cols = n_cols;
    m.rowptr = read_array<offset_t>(f, n_rows + 1, "rowptr");
    m.colind = read_array<index_t>(f, nnz, "colind");
    if (has_values) m.val = read_array<float>(f, nnz, "val");

    if (auto v = validate(m)) {
        throw IoError("load_csr: " + v->invariant + " at index " + std::to_string(v->index));
    }
    return m;
}

} // namespace autosage
