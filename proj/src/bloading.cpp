#include "kroncoef/bloading.hpp"

#include "kroncoef/errors.hpp"
#include "kroncoef/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace kroncoef {

namespace {

constexpr int kMaxDifferenceN = 40;
constexpr double kPowerTolerance = 1e-12;
constexpr int kPowerMaxIterations = 10000;

// Fenwick tree over value-sorted positions, used for index-restricted
// counting in count_below.
class Fenwick {
public:
    explicit Fenwick(int size) : tree_(static_cast<std::size_t>(size) + 1, 0) {}

    void add(int pos, int delta) {
        for (int x = pos + 1; x < static_cast<int>(tree_.size()); x += x & -x)
            tree_[static_cast<std::size_t>(x)] += delta;
    }

    // Sum over positions [0, count).
    std::int64_t prefix(int count) const {
        std::int64_t s = 0;
        for (int x = count; x > 0; x -= x & -x) s += tree_[static_cast<std::size_t>(x)];
        return s;
    }

private:
    std::vector<std::int32_t> tree_;
};

}  // namespace

DifferenceMatrix difference_matrix(int n, int threads) {
    if (n < 1) throw std::invalid_argument("difference_matrix: n must be positive");
    if (n > kMaxDifferenceN)
        throw UnsupportedSizeError("difference_matrix: n > 40 is not supported");

    const std::vector<Partition> parts = enumerate_partitions(n);
    const int p = static_cast<int>(parts.size());
    DifferenceMatrix out;
    out.n = n;
    out.z.resize(p, p);
    if (p < 128) threads = 1;  // thread spawn costs more than the fill
    parallel_chunks(p, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            out.z(i, i) = 0;
            for (std::int64_t j = 0; j < i; ++j) {
                const int d = l1_distance(parts[static_cast<std::size_t>(i)],
                                          parts[static_cast<std::size_t>(j)]);
                out.z(i, j) = d;
                out.z(j, i) = d;
            }
        }
    });
    return out;
}

PerronResult perron_vector(const DifferenceMatrix& Z) {
    const int p = static_cast<int>(Z.z.rows());
    if (p < 1) throw std::invalid_argument("perron_vector: empty matrix");
    if (p == 1) return {0.0, Eigen::VectorXd::Ones(1), 0};

    const Eigen::MatrixXd M = Z.z.cast<double>();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(p);
    x /= x.norm();
    for (int it = 1; it <= kPowerMaxIterations; ++it) {
        Eigen::VectorXd y = M * x;
        const double norm = y.norm();
        if (!(norm > 0.0)) throw ConvergenceError("perron_vector: iterate collapsed to zero");
        y /= norm;
        const double diff = (y - x).cwiseAbs().maxCoeff();
        x = std::move(y);
        if (diff < kPowerTolerance) {
            if (x.minCoeff() <= 0.0)
                throw InternalConsistencyError("perron_vector: non-positive component");
            PerronResult r;
            r.eigenvalue = x.dot(M * x);
            r.vector = std::move(x);
            r.iterations = it;
            return r;
        }
    }
    throw ConvergenceError("perron_vector: no convergence within 10000 iterations");
}

BLoadingTable b_loadings(int n, int threads) {
    if (n < 3)
        throw DegenerateDataError("b_loadings: n < 3 makes the rescaling degenerate");
    const DifferenceMatrix Z = difference_matrix(n, threads);
    PerronResult perron = perron_vector(Z);

    BLoadingTable t;
    t.n = n;
    t.eigenvalue = perron.eigenvalue;
    t.w = std::move(perron.vector);
    const double w_min = t.w.minCoeff();
    const double w_max = t.w.maxCoeff();
    if (!(w_max > w_min))
        throw DegenerateDataError("b_loadings: constant Perron vector");
    // Dividing before scaling pins the endpoints to exactly 0 and 100.
    t.b = ((t.w.array() - w_min) / (w_max - w_min)) * 100.0;

    // b(t) over ordered triples is a sum of three independent draws from the
    // uniform distribution on the b vector, so its moments follow exactly
    // from the single-coordinate population moments.
    const int p = t.p();
    const double mean = t.b.mean();
    const double variance = (t.b.array() - mean).square().sum() / p;
    t.mean_b3 = 3.0 * mean;
    t.std_b3 = std::sqrt(3.0 * variance);
    return t;
}

double b_of_triple(const BLoadingTable& table, int i, int j, int k) {
    const int p = table.p();
    if (i < 0 || j < 0 || k < 0 || i >= p || j >= p || k >= p)
        throw std::invalid_argument("b_of_triple: index out of range");
    int a = i, b = j, c = k;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return (table.b[a] + table.b[b]) + table.b[c];
}

BStarResult b_star(const KroneckerTensor& tensor, const BLoadingTable& table) {
    if (tensor.n != table.n) throw std::invalid_argument("b_star: tensor and table n differ");
    const int p = tensor.p;
    BStarResult best;
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            for (int k = j; k < p; ++k) {
                if (tensor.at_sorted(i, j, k) != 0) continue;
                const double b = (table.b[i] + table.b[j]) + table.b[k];
                if (!best.has_zero || b < best.value) {
                    best.has_zero = true;
                    best.value = b;
                    best.i = i;
                    best.j = j;
                    best.k = k;
                }
            }
        }
    }
    return best;
}

namespace {

struct ScanState {
    double key;
    std::uint16_t a, b, c;  // positions in b-sorted order, a <= b <= c
};

struct ScanStateGreater {
    bool operator()(const ScanState& x, const ScanState& y) const {
        if (x.key != y.key) return x.key > y.key;
        if (x.a != y.a) return x.a > y.a;
        if (x.b != y.b) return x.b > y.b;
        return x.c > y.c;
    }
};

}  // namespace

BStarScanResult b_star_scan(const BLoadingTable& table, const CharacterTable& chars,
                            std::uint64_t budget, int threads) {
    if (table.n != chars.n) throw std::invalid_argument("b_star_scan: table and chars n differ");
    if (budget == 0) throw std::invalid_argument("b_star_scan: budget must be positive");
    const int p = table.p();

    // Positions sorted by b value (stable on index); a position triple
    // (a <= b <= c) maps back to a canonical index triple.
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return table.b[x] < table.b[y]; });

    auto key_of = [&](int a, int b, int c) {
        return b_of_triple(table, order[static_cast<std::size_t>(a)],
                           order[static_cast<std::size_t>(b)],
                           order[static_cast<std::size_t>(c)]);
    };

    // Each state has at most three children, and every position triple is
    // generated exactly once:
    //   (a,b,c) -> (a,b,c+1)               always
    //   (a,b,c) -> (a,b+1,c)   when b+1 == c
    //   (a,b,c) -> (a+1,b,c)   when a+1 == b == c
    // The real-valued keys are monotone along edges; floating-point grouping
    // can disturb them by an ulp, which the drain slack below absorbs.
    std::priority_queue<ScanState, std::vector<ScanState>, ScanStateGreater> heap;
    heap.push({key_of(0, 0, 0), 0, 0, 0});

    const detail::WeightedRows rows(chars);
    constexpr double kDrainSlack = 1e-9;
    constexpr std::size_t kBatch = 4096;

    BStarScanResult result;
    std::uint64_t evaluations = 0;
    double last_key = 0.0;
    bool draining = false;
    double drain_limit = 0.0;

    std::vector<ScanState> batch;
    std::vector<std::uint64_t> gs;
    batch.reserve(kBatch);
    while (!heap.empty() && evaluations < budget) {
        if (draining && heap.top().key > drain_limit) break;
        batch.clear();
        while (!heap.empty() && batch.size() < kBatch &&
               evaluations + batch.size() < budget &&
               (!draining || heap.top().key <= drain_limit)) {
            const ScanState s = heap.top();
            heap.pop();
            batch.push_back(s);
            if (s.c + 1 < p) heap.push({key_of(s.a, s.b, s.c + 1), s.a, s.b,
                                        static_cast<std::uint16_t>(s.c + 1)});
            if (s.b + 1 == s.c)
                heap.push({key_of(s.a, s.b + 1, s.c), s.a, static_cast<std::uint16_t>(s.b + 1), s.c});
            if (s.a + 1 == s.b && s.b == s.c)
                heap.push({key_of(s.a + 1, s.b, s.c), static_cast<std::uint16_t>(s.a + 1), s.b, s.c});
        }
        if (batch.empty()) break;

        gs.assign(batch.size(), 0);
        parallel_chunks(static_cast<std::int64_t>(batch.size()), threads,
                        [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t x = begin; x < end; ++x) {
                const ScanState& s = batch[static_cast<std::size_t>(x)];
                int i = order[s.a], j = order[s.b], k = order[s.c];
                if (i > j) std::swap(i, j);
                if (j > k) std::swap(j, k);
                if (i > j) std::swap(i, j);
                gs[static_cast<std::size_t>(x)] = rows.coefficient(i, j, k);
            }
        });

        evaluations += batch.size();
        last_key = batch.back().key;
        for (std::size_t x = 0; x < batch.size(); ++x) {
            if (gs[x] != 0) continue;
            const ScanState& s = batch[x];
            int i = order[s.a], j = order[s.b], k = order[s.c];
            if (i > j) std::swap(i, j);
            if (j > k) std::swap(j, k);
            if (i > j) std::swap(i, j);
            const double b = b_of_triple(table, i, j, k);
            const bool better =
                !result.found || b < result.value ||
                (b == result.value &&
                 std::array{i, j, k} < std::array{result.i, result.j, result.k});
            if (better) {
                result.found = true;
                result.value = b;
                result.i = i;
                result.j = j;
                result.k = k;
            }
            if (!draining) {
                draining = true;
                drain_limit = b + kDrainSlack;
            }
        }
    }
    result.evaluations = evaluations;
    if (!result.found) result.value = last_key;  // certified lower bound
    return result;
}

CountBelowResult count_below(const BLoadingTable& table, double threshold, int threads) {
    const int p = table.p();
    CountBelowResult out;
    out.total = static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p) *
                static_cast<std::uint64_t>(p);

    // Value-sorted b with a stable position for every index.
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return table.b[x] < table.b[y]; });
    std::vector<double> sorted_b(static_cast<std::size_t>(p));
    std::vector<int> position_of(static_cast<std::size_t>(p));
    for (int pos = 0; pos < p; ++pos) {
        sorted_b[static_cast<std::size_t>(pos)] = table.b[order[static_cast<std::size_t>(pos)]];
        position_of[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos;
    }

    // An ordered triple's b(t) sums in ascending index order, so with
    // m1 = min(i,j), m2 = max(i,j) the third coordinate splits into
    //   k <  m2:  (b_m1 + b_k) + b_m2
    //   k >= m2:  (b_m1 + b_m2) + b_k
    // Both predicates are monotone in b_k; the index restriction is handled
    // by Fenwick trees over value-sorted positions, advanced with m2.
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(resolve_thread_count(threads)), 0);
    const int chunk_count = static_cast<int>(partial.size());
    parallel_chunks(chunk_count, chunk_count, [&](std::int64_t cbegin, std::int64_t cend) {
        for (std::int64_t chunk = cbegin; chunk < cend; ++chunk) {
            const int m2_begin = static_cast<int>(static_cast<std::int64_t>(p) * chunk / chunk_count);
            const int m2_end =
                static_cast<int>(static_cast<std::int64_t>(p) * (chunk + 1) / chunk_count);
            if (m2_begin >= m2_end) continue;

            Fenwick below(p);  // positions of indices < m2
            Fenwick above(p);  // positions of indices >= m2
            for (int idx = 0; idx < m2_begin; ++idx)
                below.add(position_of[static_cast<std::size_t>(idx)], 1);
            for (int idx = m2_begin; idx < p; ++idx)
                above.add(position_of[static_cast<std::size_t>(idx)], 1);

            std::uint64_t local = 0;
            for (int m2 = m2_begin; m2 < m2_end; ++m2) {
                const double b2 = table.b[m2];
                for (int m1 = 0; m1 <= m2; ++m1) {
                    const double b1 = table.b[m1];
                    const double s2 = b1 + b2;
                    auto cut1 = std::partition_point(
                        sorted_b.begin(), sorted_b.end(),
                        [&](double v) { return (b1 + v) + b2 < threshold; });
                    auto cut2 = std::partition_point(
                        sorted_b.begin(), sorted_b.end(),
                        [&](double v) { return s2 + v < threshold; });
                    const std::int64_t pair_count =
                        below.prefix(static_cast<int>(cut1 - sorted_b.begin())) +
                        above.prefix(static_cast<int>(cut2 - sorted_b.begin()));
                    local += static_cast<std::uint64_t>(pair_count) * (m1 == m2 ? 1u : 2u);
                }
                below.add(position_of[static_cast<std::size_t>(m2)], 1);
                above.add(position_of[static_cast<std::size_t>(m2)], -1);
            }
            partial[static_cast<std::size_t>(chunk)] = local;
        }
    });
    for (std::uint64_t v : partial) out.count += v;
    return out;
}

}  // namespace kroncoef
