#include "kroncoef/kronecker.hpp"

#include "kroncoef/errors.hpp"
#include "kroncoef/parallel.hpp"
#include "kroncoef/wide_int.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kroncoef {

namespace {

constexpr int kMaxTensorN = 16;

using detail::i128;
using detail::Int256;

std::uint64_t finish_division(i128 sum, std::uint64_t factorial) {
    if (sum < 0)
        throw InternalConsistencyError("kronecker_coefficient: negative character sum");
    const detail::u128 usum = static_cast<detail::u128>(sum);
    if (usum % factorial != 0)
        throw InternalConsistencyError("kronecker_coefficient: class sum not divisible by n!");
    const detail::u128 q = usum / factorial;
    if (q > std::numeric_limits<std::uint64_t>::max())
        throw InternalConsistencyError("kronecker_coefficient: quotient out of range");
    return static_cast<std::uint64_t>(q);
}

std::uint64_t finish_division_wide(const Int256& acc, std::uint64_t factorial) {
    i128 quotient;
    std::uint64_t remainder;
    acc.divmod_u64(factorial, quotient, remainder);
    if (remainder != 0)
        throw InternalConsistencyError("kronecker_coefficient: class sum not divisible by n!");
    if (quotient < 0)
        throw InternalConsistencyError("kronecker_coefficient: negative character sum");
    if (quotient > static_cast<i128>(std::numeric_limits<std::uint64_t>::max()))
        throw InternalConsistencyError("kronecker_coefficient: quotient out of range");
    return static_cast<std::uint64_t>(quotient);
}

std::uint64_t wide_sum(const CharacterTable& t, int i, int j, int k) {
    // A single term class_size * chi_i * chi_j * chi_k is bounded by
    // n!^(3/2) (Cauchy-Schwarz on character columns), which fits a signed
    // 128-bit value for n <= 20; only the accumulation needs 256 bits.
    const int p = t.p();
    Int256 acc;
    for (int c = 0; c < p; ++c) {
        const i128 a = static_cast<i128>(t.classes[static_cast<std::size_t>(c)].size) * t.chi(i, c);
        i128 ab, term;
        if (!detail::mul_checked(a, static_cast<i128>(t.chi(j, c)), ab) ||
            !detail::mul_checked(ab, static_cast<i128>(t.chi(k, c)), term))
            throw InternalConsistencyError("kronecker_coefficient: class term exceeds 128 bits");
        acc.add_i128(term);
    }
    return finish_division_wide(acc, t.factorial);
}

}  // namespace

namespace detail {

std::uint64_t kron_class_sum(const CharacterTable& t, int i, int j, int k, bool force_wide) {
    if (force_wide) return wide_sum(t, i, j, k);
    const int p = t.p();
    i128 acc = 0;
    for (int c = 0; c < p; ++c) {
        const i128 pair = static_cast<i128>(t.chi(j, c)) * t.chi(k, c);
        const i128 a = static_cast<i128>(t.classes[static_cast<std::size_t>(c)].size) * t.chi(i, c);
        i128 term;
        if (!mul_checked(a, pair, term) || !add_checked(acc, term, acc))
            return wide_sum(t, i, j, k);
    }
    return finish_division(acc, t.factorial);
}

WeightedRows::WeightedRows(const CharacterTable& table)
    : p(table.p()), factorial(table.factorial) {
    const std::size_t size = static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
    chi.resize(size);
    weighted.resize(size);
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) {
            const std::int64_t value = table.chi(r, c);
            chi[static_cast<std::size_t>(r) * p + c] = value;
            std::int64_t w;
            if (!mul_checked(
                    static_cast<std::int64_t>(table.classes[static_cast<std::size_t>(c)].size),
                    value, w))
                throw InternalConsistencyError("weighted character row overflow");
            weighted[static_cast<std::size_t>(r) * p + c] = w;
        }
    }
}

std::uint64_t WeightedRows::coefficient(int i, int j, int k) const {
    const std::int64_t* wi = weighted_row(i);
    const std::int64_t* cj = chi_row(j);
    const std::int64_t* ck = chi_row(k);
    i128 acc = 0;
    bool narrow = true;
    for (int c = 0; c < p; ++c) {
        const i128 pair = static_cast<i128>(cj[c]) * ck[c];
        i128 term;
        if (!mul_checked(static_cast<i128>(wi[c]), pair, term) || !add_checked(acc, term, acc)) {
            narrow = false;
            break;
        }
    }
    if (narrow) return finish_division(acc, factorial);

    Int256 wide;
    for (int c = 0; c < p; ++c) {
        const i128 pair = static_cast<i128>(cj[c]) * ck[c];
        i128 term;
        if (!mul_checked(static_cast<i128>(wi[c]), pair, term))
            throw InternalConsistencyError("kronecker_coefficient: class term exceeds 128 bits");
        wide.add_i128(term);
    }
    return finish_division_wide(wide, factorial);
}

}  // namespace detail

std::uint32_t KroneckerTensor::at(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= p || j >= p || k >= p)
        throw std::invalid_argument("KroneckerTensor: index out of range");
    int a = i, b = j, c = k;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return at_sorted(a, b, c);
}

std::uint64_t kronecker_coefficient(int i, int j, int k, const CharacterTable& table) {
    const int p = table.p();
    if (i < 0 || j < 0 || k < 0 || i >= p || j >= p || k >= p)
        throw std::invalid_argument("kronecker_coefficient: index out of range");
    return detail::kron_class_sum(table, i, j, k, false);
}

std::uint64_t kronecker_coefficient(const Partition& lambda, const Partition& mu,
                                    const Partition& nu, const CharacterTable& table) {
    if (lambda.n() != table.n || mu.n() != table.n || nu.n() != table.n)
        throw std::invalid_argument("kronecker_coefficient: partition n does not match table");
    return kronecker_coefficient(index_of(lambda, table.n), index_of(mu, table.n),
                                 index_of(nu, table.n), table);
}

KroneckerTensor kronecker_tensor(const CharacterTable& table, int threads) {
    const int n = table.n;
    if (n < 1 || n > kMaxTensorN)
        throw UnsupportedSizeError("kronecker_tensor: full tensor supported for 1 <= n <= 16");

    const int p = table.p();
    KroneckerTensor tensor;
    tensor.n = n;
    tensor.p = p;
    tensor.total_triples =
        static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p);
    const std::uint64_t up = static_cast<std::uint64_t>(p);
    tensor.coeffs.assign(static_cast<std::size_t>(KroneckerTensor::rank(up - 1, up - 1, up - 1)) + 1,
                         0);

    const detail::WeightedRows rows(table);

    // Pairs (j, k) with j <= k, processed in chunks; each pair owns the
    // contiguous rank range for i = 0..j, so writes never overlap.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(p) * (static_cast<std::size_t>(p) + 1) / 2);
    for (int k = 0; k < p; ++k)
        for (int j = 0; j <= k; ++j) pairs.emplace_back(j, k);

    parallel_chunks(static_cast<std::int64_t>(pairs.size()), threads,
                    [&](std::int64_t begin, std::int64_t end) {
        std::vector<i128> pair_products(static_cast<std::size_t>(p));
        for (std::int64_t idx = begin; idx < end; ++idx) {
            const auto [j, k] = pairs[static_cast<std::size_t>(idx)];
            const std::int64_t* cj = rows.chi_row(j);
            const std::int64_t* ck = rows.chi_row(k);
            for (int c = 0; c < p; ++c)
                pair_products[static_cast<std::size_t>(c)] = static_cast<i128>(cj[c]) * ck[c];
            const std::uint64_t base =
                KroneckerTensor::rank(0, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(k));
            for (int i = 0; i <= j; ++i) {
                const std::int64_t* wi = rows.weighted_row(i);
                i128 acc = 0;
                bool ok = true;
                for (int c = 0; c < p; ++c) {
                    i128 term;
                    if (!detail::mul_checked(static_cast<i128>(wi[c]),
                                             pair_products[static_cast<std::size_t>(c)], term) ||
                        !detail::add_checked(acc, term, acc)) {
                        ok = false;
                        break;
                    }
                }
                const std::uint64_t g =
                    ok ? finish_division(acc, rows.factorial) : rows.coefficient(i, j, k);
                if (g > std::numeric_limits<std::uint32_t>::max())
                    throw InternalConsistencyError("kronecker_tensor: coefficient exceeds 32 bits");
                tensor.coeffs[static_cast<std::size_t>(base) + static_cast<std::size_t>(i)] =
                    static_cast<std::uint32_t>(g);
            }
        }
    });
    return tensor;
}

KroneckerTensor kronecker_tensor(int n, int threads) {
    return kronecker_tensor(character_table(n, false, threads), threads);
}

bool is_nonzero(const KroneckerTensor& tensor, int i, int j, int k) {
    return tensor.at(i, j, k) != 0;
}

double nonzero_ratio(const KroneckerTensor& tensor) {
    std::uint64_t weighted_nonzero = 0;
    const int p = tensor.p;
    for (int k = 0; k < p; ++k)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= j; ++i)
                if (tensor.at_sorted(i, j, k) != 0)
                    weighted_nonzero += static_cast<std::uint64_t>(orbit_weight(i, j, k));
    return static_cast<double>(weighted_nonzero) / static_cast<double>(tensor.total_triples);
}

}  // namespace kroncoef
