#pragma once

#include "kroncoef/characters.hpp"
#include "kroncoef/kronecker.hpp"
#include "kroncoef/partition.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace kroncoef {

/// Pairwise L1 distances between zero-padded partition vectors, in
/// canonical partition order. Symmetric, zero diagonal, even entries.
struct DifferenceMatrix {
    int n = 0;
    Eigen::MatrixXi z;
};

struct PerronResult {
    double eigenvalue = 0.0;
    Eigen::VectorXd vector;  // unit Euclidean norm, strictly positive
    int iterations = 0;
};

/// Perron eigenvector data and the derived b-loadings on [0, 100],
/// together with the mean and standard deviation of the triple sums
/// b(t) over all ordered triples.
struct BLoadingTable {
    int n = 0;
    double eigenvalue = 0.0;
    Eigen::VectorXd w;
    Eigen::VectorXd b;
    double mean_b3 = 0.0;
    double std_b3 = 0.0;

    int p() const { return static_cast<int>(b.size()); }
};

/// 1 <= n <= 40.
DifferenceMatrix difference_matrix(int n, int threads = 0);

/// Power iteration from the all-ones vector with Euclidean renormalization
/// per step; converged when successive iterates differ by < 1e-12 in the
/// infinity norm (at most 10000 iterations). Eigenvalue by Rayleigh quotient.
PerronResult perron_vector(const DifferenceMatrix& Z);

/// Requires n >= 3 (w_max == w_min below that makes the rescaling 0/0).
BLoadingTable b_loadings(int n, int threads = 0);

/// b_i + b_j + b_k, summed in ascending index order so the result is
/// bit-identical under permutations of the indices.
double b_of_triple(const BLoadingTable& table, int i, int j, int k);

struct BStarResult {
    bool has_zero = false;    // false when no vanishing coefficient exists
    double value = 0.0;       // min b(t) over triples with g(t) == 0
    int i = -1, j = -1, k = -1;
};

/// Exhaustive minimum over the materialized tensor (canonical triples
/// suffice: b and g are permutation-invariant).
BStarResult b_star(const KroneckerTensor& tensor, const BLoadingTable& table);

struct BStarScanResult {
    bool found = false;        // true: exact b_star; false: certified lower bound
    double value = 0.0;
    std::uint64_t evaluations = 0;
    int i = -1, j = -1, k = -1;
};

/// Enumerates canonical triples in ascending b(t) order (lazy heap merge
/// over b-sorted positions), evaluating g per triple until the first zero.
/// If the evaluation budget runs out first, the largest b examined is
/// returned as a lower bound for b_star.
BStarScanResult b_star_scan(const BLoadingTable& table, const CharacterTable& chars,
                            std::uint64_t budget, int threads = 0);

struct CountBelowResult {
    std::uint64_t count = 0;  // ordered triples with b(t) < threshold (strict)
    std::uint64_t total = 0;  // p(n)^3
};

/// O(p^2 log p): for each index pair, binary-search the admissible third
/// coordinate over value-sorted b. Reproduces the definitional summation
/// grouping exactly, so it matches the brute-force count bit for bit.
CountBelowResult count_below(const BLoadingTable& table, double threshold, int threads = 0);

}  // namespace kroncoef
