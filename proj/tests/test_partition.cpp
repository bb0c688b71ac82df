#include "kroncoef/partition.hpp"

#include "kroncoef/errors.hpp"
#include "oracles.hpp"

#include "doctest.h"

#include <random>

using kroncoef::Partition;
using kroncoef::enumerate_partitions;

namespace {

Partition make(std::vector<int> parts) { return Partition(std::move(parts)); }

Partition random_partition(const std::vector<Partition>& all, std::mt19937_64& rng) {
    return all[static_cast<std::size_t>(rng() % all.size())];
}

}  // namespace

TEST_CASE("P(6) is the canonical eleven-element list") {
    const std::vector<std::vector<int>> expected{
        {6}, {5, 1}, {4, 2}, {4, 1, 1}, {3, 3}, {3, 2, 1},
        {3, 1, 1, 1}, {2, 2, 2}, {2, 2, 1, 1}, {2, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1}};
    const auto got = enumerate_partitions(6);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(got[i].parts() == expected[i]);
}

TEST_CASE("small enumerations") {
    const auto p1 = enumerate_partitions(1);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0].parts() == std::vector<int>{1});

    const std::vector<std::vector<int>> expected4{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
    const auto p4 = enumerate_partitions(4);
    REQUIRE(p4.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(p4[i].parts() == expected4[i]);
}

TEST_CASE("enumeration length matches the pentagonal recurrence for n <= 40") {
    for (int n = 1; n <= 40; ++n)
        CHECK(enumerate_partitions(n).size() == oracles::pentagonal_partition_count(n));
}

TEST_CASE("enumeration agrees with backtracking for n <= 12") {
    for (int n = 1; n <= 12; ++n) {
        const auto got = enumerate_partitions(n);
        const auto expected = oracles::backtrack_partitions(n);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].parts() == expected[i]);
    }
}

TEST_CASE("ordering is a strict descending-lex total order") {
    for (int n : {3, 7, 11, 15}) {
        const auto all = enumerate_partitions(n);
        for (std::size_t i = 0; i + 1 < all.size(); ++i) {
            CHECK(kroncoef::canonical_less(all[i], all[i + 1]));
            CHECK_FALSE(kroncoef::canonical_less(all[i + 1], all[i]));
        }
    }
}

TEST_CASE("enumeration bounds") {
    CHECK_THROWS_AS(enumerate_partitions(0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_partitions(-3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_partitions(41), kroncoef::UnsupportedSizeError);
}

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(make({2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(make({3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make({-1}), std::invalid_argument);
}

TEST_CASE("pad") {
    const Eigen::VectorXi v = kroncoef::pad(make({5, 1}), 6);
    CHECK(v.size() == 6);
    CHECK(v[0] == 5);
    CHECK(v[1] == 1);
    for (int i = 2; i < 6; ++i) CHECK(v[i] == 0);

    const Eigen::VectorXi single = kroncoef::pad(make({7}), 7);
    CHECK(single[0] == 7);
    CHECK(single.tail(6).isZero());

    const Eigen::VectorXi triple = kroncoef::pad(make({2, 2, 2}), 6);
    CHECK(triple.head(3).sum() == 6);
    CHECK(triple.tail(3).isZero());

    CHECK_THROWS_AS(kroncoef::pad(make({5, 1}), 7), std::invalid_argument);
}

TEST_CASE("l1 distance examples") {
    CHECK(kroncoef::l1_distance(make({6}), make({5, 1})) == 2);
    CHECK(kroncoef::l1_distance(make({3, 2, 1}), make({3, 2, 1})) == 0);
    CHECK(kroncoef::l1_distance(make({6}), make({1, 1, 1, 1, 1, 1})) == 10);
    CHECK_THROWS_AS(kroncoef::l1_distance(make({3}), make({2, 2})), std::invalid_argument);
}

TEST_CASE("l1 distance is an even metric") {
    std::mt19937_64 rng(7);
    for (int n : {5, 9, 14}) {
        const auto all = enumerate_partitions(n);
        for (int trial = 0; trial < 300; ++trial) {
            const Partition a = random_partition(all, rng);
            const Partition b = random_partition(all, rng);
            const Partition c = random_partition(all, rng);
            const int ab = kroncoef::l1_distance(a, b);
            CHECK(ab % 2 == 0);
            CHECK(ab == kroncoef::l1_distance(b, a));
            CHECK((ab == 0) == (a == b));
            CHECK(ab <= kroncoef::l1_distance(a, c) + kroncoef::l1_distance(c, b));
        }
    }
}

TEST_CASE("conjugate") {
    CHECK(make({6}).conjugate().parts() == std::vector<int>{1, 1, 1, 1, 1, 1});
    CHECK(make({4, 2}).conjugate().parts() == std::vector<int>{2, 2, 1, 1});
    CHECK(make({2, 1}).conjugate() == make({2, 1}));
    for (int n = 1; n <= 12; ++n)
        for (const Partition& p : enumerate_partitions(n)) {
            CHECK(p.conjugate().n() == n);
            CHECK(p.conjugate().conjugate() == p);
        }
}

TEST_CASE("index_of") {
    CHECK(kroncoef::index_of(make({6}), 6) == 0);
    CHECK(kroncoef::index_of(make({1, 1, 1, 1, 1, 1}), 6) == 10);
    CHECK(kroncoef::index_of(make({3, 2, 1}), 6) == 5);
    CHECK_THROWS_AS(kroncoef::index_of(make({3, 2}), 6), std::invalid_argument);
    for (int n : {4, 9, 13}) {
        const auto all = enumerate_partitions(n);
        for (std::size_t i = 0; i < all.size(); ++i)
            CHECK(kroncoef::index_of(all[i], n) == static_cast<int>(i));
    }
}

TEST_CASE("to_string uses space-separated parts") {
    CHECK(kroncoef::to_string(make({12, 4, 2})) == "12 4 2");
    CHECK(kroncoef::to_string(make({5})) == "5");
}
