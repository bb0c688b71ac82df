#include "kroncoef/characters.hpp"

#include "kroncoef/errors.hpp"
#include "kroncoef/parallel.hpp"
#include "kroncoef/wide_int.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace kroncoef {

namespace {

constexpr int kMaxTableN = 20;

using detail::i128;

// Lists of P(m) for every remaining sum m <= n, shared read-only by all
// column evaluators.
struct PartitionLists {
    explicit PartitionLists(int n) : by_sum(static_cast<std::size_t>(n) + 1) {
        for (int m = 1; m <= n; ++m) by_sum[static_cast<std::size_t>(m)] = enumerate_partitions(m);
    }
    int index(const Partition& p) const {
        const auto& list = by_sum[static_cast<std::size_t>(p.n())];
        auto it = std::lower_bound(list.begin(), list.end(), p, canonical_less);
        return static_cast<int>(it - list.begin());
    }
    std::vector<std::vector<Partition>> by_sum;
};

// Murnaghan-Nakayama for one cycle type: chi(shape, depth) sums signed
// border-strip removals of length rho[depth]. Memoized on
// (depth, canonical index of shape in P(remaining sum)); the cycle parts
// are consumed largest-first, so the remaining sum is a function of depth.
class ColumnEvaluator {
public:
    ColumnEvaluator(const PartitionLists& lists, const Partition& rho)
        : lists_(lists), rho_(rho.parts()) {
        memo_val_.resize(rho_.size());
        memo_set_.resize(rho_.size());
        int remaining = rho.n();
        for (std::size_t d = 0; d < rho_.size(); ++d) {
            const std::size_t count =
                remaining > 0 ? lists_.by_sum[static_cast<std::size_t>(remaining)].size() : 1;
            memo_val_[d].assign(count, 0);
            memo_set_[d].assign(count, 0);
            remaining -= rho_[d];
        }
    }

    std::int64_t chi(const Partition& shape) { return eval(shape, 0); }

private:
    std::int64_t eval(const Partition& shape, int depth) {
        if (shape.rows() == 0) return 1;
        const std::size_t d = static_cast<std::size_t>(depth);
        const int idx = lists_.index(shape);
        if (memo_set_[d][static_cast<std::size_t>(idx)])
            return memo_val_[d][static_cast<std::size_t>(idx)];

        const int ell = rho_[d];
        const int m = shape.rows();
        // Beta-set encoding: beta_i = part_i + (m-1-i), all distinct, each
        // <= n + m - 1 < 64, so the set fits a 64-bit mask. Removing a
        // border strip of length ell moves one beta down by ell; the strip
        // height is the number of betas it jumps over.
        std::uint64_t mask = 0;
        int beta[64];
        for (int i = 0; i < m; ++i) {
            beta[i] = shape.parts()[static_cast<std::size_t>(i)] + (m - 1 - i);
            mask |= std::uint64_t{1} << beta[i];
        }

        std::int64_t total = 0;
        std::vector<int> child_parts;
        child_parts.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const int b = beta[i];
            const int nb = b - ell;
            if (nb < 0 || (mask >> nb) & 1) continue;
            const std::uint64_t between =
                (mask & ((std::uint64_t{1} << b) - 1)) >> (nb + 1);
            const int height = std::popcount(between);

            const std::uint64_t child_mask =
                (mask ^ (std::uint64_t{1} << b)) | (std::uint64_t{1} << nb);
            child_parts.clear();
            int row = 0;
            for (int bit = 63; bit >= 0; --bit) {
                if (!((child_mask >> bit) & 1)) continue;
                const int part = bit - (m - 1 - row);
                if (part > 0) child_parts.push_back(part);
                ++row;
            }
            const std::int64_t sub = eval(Partition(child_parts), depth + 1);
            if (!detail::add_checked(total, (height & 1) ? -sub : sub, total))
                throw InternalConsistencyError("mn_character: 64-bit overflow");
        }
        memo_val_[d][static_cast<std::size_t>(idx)] = total;
        memo_set_[d][static_cast<std::size_t>(idx)] = 1;
        return total;
    }

    const PartitionLists& lists_;
    const std::vector<int>& rho_;
    std::vector<std::vector<std::int64_t>> memo_val_;
    std::vector<std::vector<char>> memo_set_;
};

void check_structure(const CharacterTable& t) {
    const int p = t.p();
    std::uint64_t class_sum = 0;
    for (const auto& c : t.classes) {
        if (c.centralizer * c.size != t.factorial)
            throw InternalConsistencyError("class size times centralizer is not n!");
        class_sum += c.size;
    }
    if (class_sum != t.factorial)
        throw InternalConsistencyError("class sizes do not sum to n!");

    std::uint64_t dim_sq_sum = 0;
    for (int r = 0; r < p; ++r) {
        if (t.chi(0, r) != 1)
            throw InternalConsistencyError("trivial representation row is not all ones");
        const int sign_parts = t.partitions[static_cast<std::size_t>(r)].rows();
        const std::int64_t expected_sign = ((t.n - sign_parts) & 1) ? -1 : 1;
        if (t.chi(p - 1, r) != expected_sign)
            throw InternalConsistencyError("sign representation row mismatch");
        const std::int64_t dim = t.dimension(r);
        if (dim <= 0) throw InternalConsistencyError("non-positive dimension");
        std::uint64_t sq;
        if (__builtin_mul_overflow(static_cast<std::uint64_t>(dim),
                                   static_cast<std::uint64_t>(dim), &sq) ||
            __builtin_add_overflow(dim_sq_sum, sq, &dim_sq_sum))
            throw InternalConsistencyError("dimension sum overflow");
    }
    if (dim_sq_sum != t.factorial)
        throw InternalConsistencyError("sum of squared dimensions is not n!");
}

}  // namespace

std::uint64_t factorial_u64(int n) {
    if (n < 0 || n > kMaxTableN) throw UnsupportedSizeError("factorial_u64: n outside 0..20");
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::uint64_t centralizer_order(const Partition& rho) {
    std::uint64_t z = 1;
    std::size_t i = 0;
    const auto& parts = rho.parts();
    while (i < parts.size()) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        const std::uint64_t mult = j - i;
        for (std::uint64_t k = 0; k < mult; ++k) {
            if (__builtin_mul_overflow(z, static_cast<std::uint64_t>(parts[i]), &z) ||
                __builtin_mul_overflow(z, k + 1, &z))
                throw InternalConsistencyError("centralizer_order: overflow");
        }
        i = j;
    }
    return z;
}

std::int64_t mn_character(const Partition& lambda, const Partition& rho) {
    if (lambda.n() != rho.n())
        throw std::invalid_argument("mn_character: partitions of different n");
    if (lambda.n() == 0) return 1;
    if (lambda.n() > kMaxTableN)
        throw UnsupportedSizeError("mn_character: n > 20 is not supported");
    PartitionLists lists(lambda.n());
    ColumnEvaluator column(lists, rho);
    return column.chi(lambda);
}

CharacterTable character_table(int n, bool verify, int threads) {
    if (n < 1 || n > kMaxTableN)
        throw UnsupportedSizeError("character_table: n outside 1..20");

    CharacterTable t;
    t.n = n;
    t.partitions = enumerate_partitions(n);
    t.factorial = factorial_u64(n);
    const int p = t.p();
    t.chi.resize(p, p);
    t.classes.resize(static_cast<std::size_t>(p));
    for (int c = 0; c < p; ++c) {
        ClassData& cls = t.classes[static_cast<std::size_t>(c)];
        cls.rho = t.partitions[static_cast<std::size_t>(c)];
        cls.centralizer = centralizer_order(cls.rho);
        cls.size = t.factorial / cls.centralizer;
    }

    const PartitionLists lists(n);
    parallel_chunks(p, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t c = begin; c < end; ++c) {
            ColumnEvaluator column(lists, t.classes[static_cast<std::size_t>(c)].rho);
            for (int r = 0; r < p; ++r)
                t.chi(r, c) = column.chi(t.partitions[static_cast<std::size_t>(r)]);
        }
    });

    check_structure(t);
    if (verify) {
        const OrthogonalityReport report = verify_orthogonality(t);
        if (!report.passed) throw InternalConsistencyError(report.message);
    }
    return t;
}

OrthogonalityReport verify_orthogonality(const CharacterTable& t) {
    const int p = t.p();
    for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
            i128 sum = 0;
            for (int c = 0; c < p; ++c) {
                const i128 term = static_cast<i128>(t.classes[static_cast<std::size_t>(c)].size) *
                                  t.chi(a, c) * t.chi(b, c);
                sum += term;
            }
            const i128 expected = (a == b) ? static_cast<i128>(t.factorial) : 0;
            if (sum != expected) {
                OrthogonalityReport r;
                r.passed = false;
                r.lambda = a;
                r.mu = b;
                r.message = "first orthogonality fails for rows " + std::to_string(a) + ", " +
                            std::to_string(b);
                return r;
            }
        }
    }
    return {};
}

}  // namespace kroncoef
