#include "kroncoef/partition.hpp"

#include "kroncoef/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace kroncoef {

namespace {
constexpr int kMaxEnumerationN = 40;
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    int prev = std::numeric_limits<int>::max();
    long sum = 0;
    for (int part : parts_) {
        if (part <= 0) throw std::invalid_argument("partition parts must be positive");
        if (part > prev) throw std::invalid_argument("partition parts must be non-increasing");
        prev = part;
        sum += part;
    }
    if (sum > std::numeric_limits<int>::max())
        throw std::invalid_argument("partition sum too large");
    n_ = static_cast<int>(sum);
}

Partition Partition::conjugate() const {
    if (parts_.empty()) return {};
    std::vector<int> out(static_cast<std::size_t>(parts_[0]));
    for (int col = 0; col < parts_[0]; ++col) {
        int rows_ge = 0;
        for (int part : parts_) {
            if (part > col) ++rows_ge;
        }
        out[static_cast<std::size_t>(col)] = rows_ge;
    }
    return Partition(std::move(out));
}

bool canonical_less(const Partition& a, const Partition& b) {
    const int rows = std::max(a.rows(), b.rows());
    for (int i = 0; i < rows; ++i) {
        if (a.part(i) != b.part(i)) return a.part(i) > b.part(i);
    }
    return false;
}

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_partitions: n must be positive");
    if (n > kMaxEnumerationN)
        throw UnsupportedSizeError("enumerate_partitions: n > 40 is not supported");

    std::vector<Partition> out;
    std::vector<int> a{n};
    for (;;) {
        out.emplace_back(Partition(a));
        // Decrement the last part > 1, then refill greedily: this is the
        // lexicographic successor on padded vectors, in descending order.
        int j = static_cast<int>(a.size()) - 1;
        while (j >= 0 && a[static_cast<std::size_t>(j)] == 1) --j;
        if (j < 0) break;
        const int d = a[static_cast<std::size_t>(j)] - 1;
        int rest = 1 + (static_cast<int>(a.size()) - 1 - j);
        a.resize(static_cast<std::size_t>(j) + 1);
        a[static_cast<std::size_t>(j)] = d;
        while (rest >= d) {
            a.push_back(d);
            rest -= d;
        }
        if (rest > 0) a.push_back(rest);
    }
    return out;
}

Eigen::VectorXi pad(const Partition& p, int n) {
    if (n != p.n()) throw std::invalid_argument("pad: length must equal the partition's n");
    Eigen::VectorXi v = Eigen::VectorXi::Zero(n);
    for (int i = 0; i < p.rows(); ++i) v[i] = p.parts()[static_cast<std::size_t>(i)];
    return v;
}

int l1_distance(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("l1_distance: partitions of different n");
    const int rows = std::max(a.rows(), b.rows());
    int dist = 0;
    for (int i = 0; i < rows; ++i) dist += std::abs(a.part(i) - b.part(i));
    return dist;
}

int index_of(const Partition& p, int n) {
    if (p.n() != n) throw std::invalid_argument("index_of: not a partition of n");
    const std::vector<Partition> all = enumerate_partitions(n);
    auto it = std::lower_bound(all.begin(), all.end(), p, canonical_less);
    if (it == all.end() || !(*it == p))
        throw std::invalid_argument("index_of: partition not found");
    return static_cast<int>(it - all.begin());
}

std::string to_string(const Partition& p) {
    std::string out;
    for (int i = 0; i < p.rows(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(p.parts()[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace kroncoef
