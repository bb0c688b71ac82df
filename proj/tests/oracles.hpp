#pragma once

// Independent reference implementations used only by tests. Everything here
// deliberately avoids the library's code paths: enumeration by backtracking,
// characters by row-based border-strip recursion (no beta sets, no memo),
// counts by cubic brute force.

#include "kroncoef/bloading.hpp"
#include "kroncoef/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracles {

// Euler's pentagonal-number recurrence for p(n).
inline std::uint64_t pentagonal_partition_count(int n) {
    static std::vector<std::uint64_t> cache{1};  // p(0) = 1
    for (int m = static_cast<int>(cache.size()); m <= n; ++m) {
        std::int64_t total = 0;
        for (int k = 1;; ++k) {
            const int g1 = k * (3 * k - 1) / 2;
            const int g2 = k * (3 * k + 1) / 2;
            if (g1 > m) break;
            const std::int64_t sign = (k % 2 == 1) ? 1 : -1;
            total += sign * static_cast<std::int64_t>(cache[static_cast<std::size_t>(m - g1)]);
            if (g2 <= m)
                total += sign * static_cast<std::int64_t>(cache[static_cast<std::size_t>(m - g2)]);
        }
        cache.push_back(static_cast<std::uint64_t>(total));
    }
    return cache[static_cast<std::size_t>(n)];
}

// All partitions of n by backtracking, returned in descending lexicographic
// order on padded vectors.
inline std::vector<std::vector<int>> backtrack_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    const auto recurse = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            self(self, remaining - part, part);
            current.pop_back();
        }
    };
    recurse(recurse, n, n);
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        const std::size_t rows = std::max(a.size(), b.size());
        for (std::size_t i = 0; i < rows; ++i) {
            const int av = i < a.size() ? a[i] : 0;
            const int bv = i < b.size() ? b[i] : 0;
            if (av != bv) return av > bv;
        }
        return false;
    });
    return out;
}

// dim S_lambda by the hook length formula, exact.
inline std::uint64_t hook_length_dimension(const kroncoef::Partition& lambda) {
    const auto& parts = lambda.parts();
    const kroncoef::Partition conj = lambda.conjugate();
    std::uint64_t hook_product = 1;
    for (std::size_t r = 0; r < parts.size(); ++r) {
        for (int c = 0; c < parts[r]; ++c) {
            const std::uint64_t arm = static_cast<std::uint64_t>(parts[r] - c - 1);
            const std::uint64_t leg = static_cast<std::uint64_t>(conj.parts()[static_cast<std::size_t>(c)]) -
                                      static_cast<std::uint64_t>(r) - 1;
            hook_product *= arm + leg + 1;
        }
    }
    std::uint64_t factorial = 1;
    for (int i = 2; i <= lambda.n(); ++i) factorial *= static_cast<std::uint64_t>(i);
    if (factorial % hook_product != 0) throw std::logic_error("hook formula: not divisible");
    return factorial / hook_product;
}

// chi_lambda(rho) by unmemoized recursion over row spans: a border strip of
// length ell spanning rows r1..r2 leaves mu_r = lambda_{r+1} - 1 for
// r1 <= r < r2 and mu_{r2} = lambda_{r1} - ell + (r2 - r1); it exists iff
// that tail entry keeps the shape a partition and the strip is nonempty in
// its last row. Height is r2 - r1.
inline std::int64_t rowwise_character(std::vector<int> shape, std::vector<int> cycle) {
    std::sort(cycle.begin(), cycle.end(), std::greater<int>());
    const auto recurse = [](auto&& self, const std::vector<int>& rows,
                            const std::vector<int>& parts, std::size_t depth) -> std::int64_t {
        if (rows.empty()) return 1;
        const int ell = parts[depth];
        const int m = static_cast<int>(rows.size());
        std::int64_t total = 0;
        for (int r1 = 0; r1 < m; ++r1) {
            for (int r2 = r1; r2 < m; ++r2) {
                const int tail = rows[static_cast<std::size_t>(r1)] - ell + (r2 - r1);
                const int below = r2 + 1 < m ? rows[static_cast<std::size_t>(r2 + 1)] : 0;
                if (tail < below) continue;
                if (rows[static_cast<std::size_t>(r2)] - tail < 1) continue;
                std::vector<int> next;
                next.reserve(rows.size());
                for (int r = 0; r < m; ++r) {
                    int value;
                    if (r < r1 || r > r2)
                        value = rows[static_cast<std::size_t>(r)];
                    else if (r < r2)
                        value = rows[static_cast<std::size_t>(r + 1)] - 1;
                    else
                        value = tail;
                    if (value > 0) next.push_back(value);
                }
                const std::int64_t sub = self(self, next, parts, depth + 1);
                total += ((r2 - r1) % 2 == 1) ? -sub : sub;
            }
        }
        return total;
    };
    return recurse(recurse, shape, cycle, 0);
}

// Exact centralizer order z = prod over distinct parts of part^mult * mult!.
inline std::uint64_t cycle_centralizer(const std::vector<int>& cycle) {
    std::uint64_t z = 1;
    for (std::size_t i = 0; i < cycle.size();) {
        std::size_t j = i;
        while (j < cycle.size() && cycle[j] == cycle[i]) ++j;
        for (std::size_t m = 1; m <= j - i; ++m) {
            z *= static_cast<std::uint64_t>(cycle[i]);
            z *= static_cast<std::uint64_t>(m);
        }
        i = j;
    }
    return z;
}

// Character table and class data built entirely from the row-based oracle.
struct OracleTable {
    int n = 0;
    std::vector<std::vector<int>> parts;          // canonical order
    std::vector<std::vector<std::int64_t>> chi;   // chi[lambda][rho]
    std::vector<std::uint64_t> class_size;
    std::uint64_t factorial = 1;
};

inline OracleTable oracle_table(int n) {
    OracleTable t;
    t.n = n;
    t.parts = backtrack_partitions(n);
    const std::size_t p = t.parts.size();
    for (int i = 2; i <= n; ++i) t.factorial *= static_cast<std::uint64_t>(i);
    t.chi.assign(p, std::vector<std::int64_t>(p, 0));
    for (std::size_t l = 0; l < p; ++l)
        for (std::size_t r = 0; r < p; ++r) t.chi[l][r] = rowwise_character(t.parts[l], t.parts[r]);
    t.class_size.resize(p);
    for (std::size_t r = 0; r < p; ++r)
        t.class_size[r] = t.factorial / cycle_centralizer(t.parts[r]);
    return t;
}

// Direct class-weighted character sum for an ordered triple of indices.
inline std::uint64_t oracle_kron(const OracleTable& t, int a, int b, int c) {
    __int128 sum = 0;
    for (std::size_t r = 0; r < t.parts.size(); ++r)
        sum += static_cast<__int128>(t.class_size[r]) * t.chi[static_cast<std::size_t>(a)][r] *
               t.chi[static_cast<std::size_t>(b)][r] * t.chi[static_cast<std::size_t>(c)][r];
    if (sum < 0 || sum % static_cast<__int128>(t.factorial) != 0)
        throw std::logic_error("oracle_kron: inconsistent sum");
    return static_cast<std::uint64_t>(sum / static_cast<__int128>(t.factorial));
}

// Cubic reference for count_below, summing via b_of_triple.
inline std::uint64_t brute_count_below(const kroncoef::BLoadingTable& table, double threshold) {
    const int p = table.p();
    std::uint64_t count = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                if (kroncoef::b_of_triple(table, i, j, k) < threshold) ++count;
    return count;
}

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
inline double gamma_cdf(double x, double shape, double scale) {
    if (x <= 0.0) return 0.0;
    const double a = shape;
    const double t = x / scale;
    const double log_gamma = std::lgamma(a);
    if (t < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= t / (a + n);
            sum += term;
            if (term < sum * 1e-15) break;
        }
        return sum * std::exp(-t + a * std::log(t) - log_gamma);
    }
    // Lentz continued fraction for Q(a, x).
    double b = t + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int n = 1; n < 500; ++n) {
        const double an = -n * (n - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-t + a * std::log(t) - log_gamma) * h;
}

}  // namespace oracles
