#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace kroncoef {

/// An integer partition: a non-increasing sequence of positive parts.
///
/// The default-constructed Partition is the empty partition of 0, which is
/// a valid recursion terminal (border-strip peeling ends there) even though
/// the public enumeration starts at n = 1.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    int n() const { return n_; }
    int rows() const { return static_cast<int>(parts_.size()); }
    const std::vector<int>& parts() const { return parts_; }

    /// Part at row i, or 0 past the last row.
    int part(int i) const {
        return i < static_cast<int>(parts_.size()) ? parts_[static_cast<std::size_t>(i)] : 0;
    }

    /// Transpose of the Young diagram; an involution preserving n.
    Partition conjugate() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<int> parts_;
    int n_ = 0;
};

/// All partitions of n, ordered descending-lexicographically on their
/// zero-padded n-vectors: index 0 is (n), the last index is (1,...,1).
/// Supported for 1 <= n <= 40.
std::vector<Partition> enumerate_partitions(int n);

/// Zero-padded length-n view of p; n must equal p.n().
Eigen::VectorXi pad(const Partition& p, int n);

/// Sum of |a_i - b_i| over padded vectors. Always even; requires equal n.
int l1_distance(const Partition& a, const Partition& b);

/// Position of p in enumerate_partitions(n), by binary search.
int index_of(const Partition& p, int n);

/// True if a strictly precedes b in the canonical order (a lex-greater than b).
bool canonical_less(const Partition& a, const Partition& b);

/// Space-separated part list, e.g. "12 4 2".
std::string to_string(const Partition& p);

}  // namespace kroncoef
