#include "kroncoef/cache.hpp"

#include "kroncoef/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace kroncoef {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path)
        : stream_(path, std::ios::binary | std::ios::trunc), path_(path) {
        if (!stream_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    }

    void magic(const char m[4]) { stream_.write(m, 4); }
    void u16(std::uint16_t v) { bytes(v); }
    void u32(std::uint32_t v) { bytes(v); }
    void u64(std::uint64_t v) { bytes(v); }
    void i64(std::int64_t v) { bytes(static_cast<std::uint64_t>(v)); }
    void f64(double v) { bytes(std::bit_cast<std::uint64_t>(v)); }

    void finish() {
        stream_.flush();
        if (!stream_) throw std::runtime_error("write failed for " + path_.string());
    }

private:
    template <class T>
    void bytes(T v) {
        char buf[sizeof(T)];
        for (std::size_t b = 0; b < sizeof(T); ++b)
            buf[b] = static_cast<char>((v >> (8 * b)) & 0xff);
        stream_.write(buf, sizeof(T));
    }

    std::ofstream stream_;
    std::filesystem::path path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) {
        std::ifstream stream(path, std::ios::binary);
        if (!stream) throw std::runtime_error("cannot open " + path.string() + " for reading");
        data_.assign(std::istreambuf_iterator<char>(stream), std::istreambuf_iterator<char>());
    }

    void expect_magic(const char m[4]) {
        if (data_.size() < 4 || std::memcmp(data_.data(), m, 4) != 0)
            throw CacheIntegrityError("bad magic bytes", 0);
        offset_ = 4;
    }

    std::uint16_t u16() { return static_cast<std::uint16_t>(bytes(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
    std::uint64_t u64() { return bytes(8); }
    std::int64_t i64() { return static_cast<std::int64_t>(bytes(8)); }
    double f64() { return std::bit_cast<double>(bytes(8)); }

    std::uint64_t offset() const { return offset_; }

    void expect_end() const {
        if (offset_ != data_.size())
            throw CacheIntegrityError("trailing bytes after payload", offset_);
    }

private:
    std::uint64_t bytes(std::size_t width) {
        if (offset_ + width > data_.size())
            throw CacheIntegrityError("unexpected end of file", data_.size());
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < width; ++b)
            v |= static_cast<std::uint64_t>(
                     static_cast<unsigned char>(data_[offset_ + b]))
                 << (8 * b);
        offset_ += width;
        return v;
    }

    std::vector<char> data_;
    std::uint64_t offset_ = 0;
};

void check_version(std::uint32_t version) {
    if (version != kFormatVersion)
        throw CacheVersionError("unsupported cache format version " + std::to_string(version));
}

}  // namespace

void save_character_table(const CharacterTable& table, const std::filesystem::path& path) {
    Writer w(path);
    w.magic("KRNC");
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(table.n));
    w.u32(static_cast<std::uint32_t>(table.p()));
    const int p = table.p();
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) w.i64(table.chi(r, c));
    for (const ClassData& cls : table.classes) w.u64(cls.centralizer);
    w.finish();
}

CharacterTable load_character_table(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("KRNC");
    check_version(r.u32());
    const std::uint32_t n = r.u32();
    if (n < 1 || n > 20) throw CacheIntegrityError("n outside 1..20", r.offset() - 8);

    CharacterTable t;
    t.n = static_cast<int>(n);
    t.partitions = enumerate_partitions(t.n);
    t.factorial = factorial_u64(t.n);
    const std::uint32_t p = r.u32();
    if (p != t.partitions.size())
        throw CacheIntegrityError("partition count does not match n", r.offset() - 4);

    t.chi.resize(p, p);
    for (std::uint32_t row = 0; row < p; ++row)
        for (std::uint32_t col = 0; col < p; ++col) t.chi(row, col) = r.i64();

    t.classes.resize(p);
    for (std::uint32_t c = 0; c < p; ++c) {
        ClassData& cls = t.classes[c];
        cls.rho = t.partitions[c];
        const std::uint64_t offset = r.offset();
        cls.centralizer = r.u64();
        if (cls.centralizer != centralizer_order(cls.rho))
            throw CacheIntegrityError("centralizer order mismatch", offset);
        cls.size = t.factorial / cls.centralizer;
    }
    r.expect_end();

    // Quick structural screen against payload corruption.
    std::uint64_t dim_sq = 0;
    for (std::uint32_t c = 0; c < p; ++c) {
        if (t.chi(0, c) != 1) throw CacheIntegrityError("trivial row corrupted", 16);
        const std::int64_t dim = t.dimension(static_cast<int>(c));
        if (dim <= 0) throw CacheIntegrityError("dimension column corrupted", 16);
        dim_sq += static_cast<std::uint64_t>(dim) * static_cast<std::uint64_t>(dim);
    }
    if (dim_sq != t.factorial) throw CacheIntegrityError("dimension column corrupted", 16);
    return t;
}

void save_tensor(const KroneckerTensor& tensor, const std::filesystem::path& path) {
    Writer w(path);
    w.magic("KRNT");
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(tensor.n));
    w.u64(tensor.canonical_count());
    const int p = tensor.p;
    for (int k = 0; k < p; ++k)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= j; ++i) {
                w.u16(static_cast<std::uint16_t>(i));
                w.u16(static_cast<std::uint16_t>(j));
                w.u16(static_cast<std::uint16_t>(k));
                w.u32(tensor.at_sorted(i, j, k));
            }
    w.finish();
}

KroneckerTensor load_tensor(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("KRNT");
    check_version(r.u32());
    const std::uint32_t n = r.u32();
    if (n < 1 || n > 16) throw CacheIntegrityError("n outside 1..16", r.offset() - 4);

    KroneckerTensor t;
    t.n = static_cast<int>(n);
    t.p = static_cast<int>(enumerate_partitions(t.n).size());
    const std::uint64_t up = static_cast<std::uint64_t>(t.p);
    t.total_triples = up * up * up;
    const std::uint64_t expected_count = up * (up + 1) * (up + 2) / 6;
    const std::uint64_t count = r.u64();
    if (count != expected_count)
        throw CacheIntegrityError("entry count does not match p(n)", r.offset() - 8);

    t.coeffs.assign(static_cast<std::size_t>(expected_count), 0);
    std::uint64_t rank = 0;
    for (int k = 0; k < t.p; ++k)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= j; ++i, ++rank) {
                const std::uint64_t offset = r.offset();
                const std::uint16_t fi = r.u16();
                const std::uint16_t fj = r.u16();
                const std::uint16_t fk = r.u16();
                if (fi != i || fj != j || fk != k)
                    throw CacheIntegrityError("triple indices out of canonical order", offset);
                t.coeffs[static_cast<std::size_t>(rank)] = r.u32();
            }
    r.expect_end();
    return t;
}

void save_b_table(const BLoadingTable& table, const std::filesystem::path& path) {
    Writer w(path);
    w.magic("KRNB");
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(table.n));
    w.u32(static_cast<std::uint32_t>(table.p()));
    w.f64(table.eigenvalue);
    for (int i = 0; i < table.p(); ++i) w.f64(table.w[i]);
    for (int i = 0; i < table.p(); ++i) w.f64(table.b[i]);
    w.f64(table.mean_b3);
    w.f64(table.std_b3);
    w.finish();
}

BLoadingTable load_b_table(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("KRNB");
    check_version(r.u32());
    BLoadingTable t;
    t.n = static_cast<int>(r.u32());
    if (t.n < 3 || t.n > 40) throw CacheIntegrityError("n outside 3..40", r.offset() - 4);
    const std::uint32_t p = r.u32();
    if (p != enumerate_partitions(t.n).size())
        throw CacheIntegrityError("partition count does not match n", r.offset() - 4);
    t.eigenvalue = r.f64();
    t.w.resize(p);
    t.b.resize(p);
    for (std::uint32_t i = 0; i < p; ++i) t.w[i] = r.f64();
    for (std::uint32_t i = 0; i < p; ++i) t.b[i] = r.f64();
    t.mean_b3 = r.f64();
    t.std_b3 = r.f64();
    r.expect_end();
    return t;
}

}  // namespace kroncoef
