#pragma once

#include "kroncoef/characters.hpp"
#include "kroncoef/partition.hpp"

#include <cstdint>
#include <vector>

namespace kroncoef {

/// Number of distinct ordered permutations of a sorted triple: 1, 3 or 6.
inline int orbit_weight(int i, int j, int k) {
    if (i == j && j == k) return 1;
    if (i == j || j == k) return 3;
    return 6;
}

/// Symmetry-reduced tensor of Kronecker coefficients over P(n)^3: one
/// exact value per canonical triple i <= j <= k of partition indices.
struct KroneckerTensor {
    int n = 0;
    int p = 0;
    std::uint64_t total_triples = 0;     // p^3 ordered triples
    std::vector<std::uint32_t> coeffs;   // dense, indexed by rank()

    /// Colexicographic rank of a canonical triple; requires i <= j <= k.
    static std::uint64_t rank(std::uint64_t i, std::uint64_t j, std::uint64_t k) {
        return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
    }

    std::size_t canonical_count() const { return coeffs.size(); }

    std::uint32_t at_sorted(int i, int j, int k) const {
        return coeffs[rank(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j),
                           static_cast<std::uint64_t>(k))];
    }

    /// Lookup for any index order (the coefficients are S3-symmetric).
    std::uint32_t at(int i, int j, int k) const;
};

/// g_{lambda,mu}^nu as the exact class-weighted character sum, accumulated
/// in checked 128-bit arithmetic with a 256-bit fallback on overflow.
std::uint64_t kronecker_coefficient(const Partition& lambda, const Partition& mu,
                                    const Partition& nu, const CharacterTable& table);

/// Index-based variant; indices into table.partitions.
std::uint64_t kronecker_coefficient(int i, int j, int k, const CharacterTable& table);

/// Full tensor over canonical triples; supported for 1 <= n <= 16.
KroneckerTensor kronecker_tensor(const CharacterTable& table, int threads = 0);
KroneckerTensor kronecker_tensor(int n, int threads = 0);

bool is_nonzero(const KroneckerTensor& tensor, int i, int j, int k);

/// Fraction of ordered triples with g != 0 (canonical entries weighted by
/// orbit size).
double nonzero_ratio(const KroneckerTensor& tensor);

namespace detail {
/// Exact class sum for one triple; the wide flag forces the 256-bit
/// accumulation path (used by tests).
std::uint64_t kron_class_sum(const CharacterTable& table, int i, int j, int k, bool force_wide);

/// Row-major copies of the character matrix for tight per-class loops:
/// chi rows and class-size-weighted rows. Built once per bulk computation.
struct WeightedRows {
    explicit WeightedRows(const CharacterTable& table);

    int p = 0;
    std::uint64_t factorial = 0;
    std::vector<std::int64_t> chi;       // chi[r*p + c]
    std::vector<std::int64_t> weighted;  // class_size[c] * chi[r*p + c]

    const std::int64_t* chi_row(int r) const { return chi.data() + static_cast<std::size_t>(r) * p; }
    const std::int64_t* weighted_row(int r) const {
        return weighted.data() + static_cast<std::size_t>(r) * p;
    }

    /// Exact g for an index triple, 128-bit checked with 256-bit fallback.
    std::uint64_t coefficient(int i, int j, int k) const;
};
}  // namespace detail

}  // namespace kroncoef
