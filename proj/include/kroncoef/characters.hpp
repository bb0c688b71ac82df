#pragma once

#include "kroncoef/partition.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace kroncoef {

/// One conjugacy class of S_n, keyed by cycle type.
struct ClassData {
    Partition rho;
    std::uint64_t centralizer = 0;  // z_rho = prod i^{m_i} * m_i!
    std::uint64_t size = 0;         // n! / z_rho
};

using CharMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Exact integer character table of S_n. Rows are irreducibles (by
/// partition lambda), columns are classes (by cycle type rho), both in
/// canonical partition order. Immutable once built.
struct CharacterTable {
    int n = 0;
    std::vector<Partition> partitions;
    CharMatrix chi;
    std::vector<ClassData> classes;
    std::uint64_t factorial = 0;

    int p() const { return static_cast<int>(partitions.size()); }

    /// dim S_lambda = chi_lambda(identity); the identity class (1^n) is the
    /// last column in canonical order.
    std::int64_t dimension(int lambda_index) const { return chi(lambda_index, p() - 1); }
};

struct OrthogonalityReport {
    bool passed = true;
    int lambda = -1;  // first offending row pair when failed
    int mu = -1;
    std::string message;
};

/// z_rho for a cycle type.
std::uint64_t centralizer_order(const Partition& rho);

/// n! as a checked 64-bit value; n <= 20.
std::uint64_t factorial_u64(int n);

/// chi_lambda(rho) by the Murnaghan-Nakayama border-strip recursion,
/// peeling parts of rho largest-first. Exact; throws on 64-bit overflow.
std::int64_t mn_character(const Partition& lambda, const Partition& rho);

/// Full table for 1 <= n <= 20. Cheap structural invariants (trivial and
/// sign rows, dimension column) are always checked; `verify` additionally
/// runs the full first-orthogonality check and throws
/// InternalConsistencyError if it fails.
CharacterTable character_table(int n, bool verify = true, int threads = 0);

/// First orthogonality over all row pairs, in exact integer arithmetic:
/// sum_rho class_size * chi_lambda * chi_mu == n! * delta.
OrthogonalityReport verify_orthogonality(const CharacterTable& table);

}  // namespace kroncoef
