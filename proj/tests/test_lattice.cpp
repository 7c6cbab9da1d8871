#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "lattice.hpp"
#include "oracles.hpp"

using namespace sphlab;
using testutil::code_of;

namespace {

std::uint64_t as_u64(Count c) { return static_cast<std::uint64_t>(c); }

std::vector<std::vector<std::int32_t>> to_points(const std::vector<std::int32_t>& flat, int d) {
    std::vector<std::vector<std::int32_t>> pts;
    for (std::size_t i = 0; i + d <= flat.size(); i += d)
        pts.emplace_back(flat.begin() + i, flat.begin() + i + d);
    return pts;
}

}  // namespace

TEST_CASE("representation counts match a brute-force box scan") {
    for (int d : {4, 5}) {
        auto table = count_reps_upto(d, 40);
        for (std::int64_t lam = 0; lam <= 40; ++lam) {
            auto expected = oracles::brute_count(d, lam);
            CAPTURE(d);
            CAPTURE(lam);
            CHECK(as_u64(table.at(lam)) == expected);
            CHECK(as_u64(count_reps({d, lam})) == expected);
        }
    }
    auto t6 = count_reps_upto(6, 12);
    for (std::int64_t lam = 0; lam <= 12; ++lam)
        CHECK(as_u64(t6.at(lam)) == oracles::brute_count(6, lam));
}

TEST_CASE("frozen counts in five and six dimensions") {
    auto t5 = count_reps_upto(5, 2000);
    CHECK(as_u64(t5.at(0)) == 1);
    CHECK(as_u64(t5.at(1)) == 10);
    CHECK(as_u64(t5.at(2)) == 40);
    CHECK(as_u64(t5.at(4)) == 90);
    CHECK(as_u64(t5.at(25)) == 1210);
    CHECK(as_u64(t5.at(100)) == 10890);
    CHECK(as_u64(t5.at(1000)) == 352800);
    CHECK(as_u64(t5.at(2000)) == 739872);

    auto t6 = count_reps_upto(6, 300);
    const std::uint64_t head[] = {1,    12,  60,   160,  252, 312, 544,
                                  960, 1020, 876, 1560, 2400, 2080};
    for (std::int64_t lam = 0; lam <= 12; ++lam) CHECK(as_u64(t6.at(lam)) == head[lam]);
    CHECK(as_u64(t6.at(100)) == 164052);
    CHECK(as_u64(t6.at(300)) == 1354080);
    std::uint64_t total = 0;
    for (auto c : t6.counts) total += as_u64(c);
    CHECK(total == 140370077u);
}

TEST_CASE("four-square divisor identity agrees with the sieve") {
    auto t4 = count_reps_upto(4, 2000);
    for (std::int64_t n = 0; n <= 2000; ++n) {
        CAPTURE(n);
        CHECK(as_u64(t4.at(n)) == as_u64(jacobi_r4(n)));
    }
}

TEST_CASE("powers of four keep exactly 24 representations in dimension four") {
    std::int64_t lam = 1;
    for (int k = 1; k <= 6; ++k) {
        lam *= 4;
        CHECK(as_u64(count_reps({4, lam})) == 24);
        CHECK(as_u64(jacobi_r4(lam)) == 24);
    }
}

TEST_CASE("sphere enumeration is exact, ordered, and symmetric") {
    for (int d : {4, 5}) {
        for (std::int64_t lam : {0, 1, 2, 5, 12, 25}) {
            SphereSpec spec{d, lam};
            auto flat = enumerate_sphere(spec);
            auto pts = to_points(flat, d);
            CAPTURE(d);
            CAPTURE(lam);
            REQUIRE(pts.size() == as_u64(count_reps(spec)));
            CHECK(std::is_sorted(pts.begin(), pts.end()));
            CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
            CHECK(pts == oracles::brute_points(d, lam));

            std::set<std::vector<std::int32_t>> all(pts.begin(), pts.end());
            for (const auto& p : pts) {
                std::int64_t norm = 0;
                for (auto c : p) norm += std::int64_t(c) * c;
                CHECK(norm == lam);
                auto flipped = p;
                flipped[0] = -flipped[0];
                CHECK(all.count(flipped) == 1);
                auto rotated = p;
                std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
                CHECK(all.count(rotated) == 1);
            }
        }
    }
}

TEST_CASE("streaming walk and materialized enumeration agree") {
    SphereSpec spec{5, 33};
    std::vector<std::int32_t> streamed;
    walk_sphere(spec, [&](const std::int32_t* y) {
        streamed.insert(streamed.end(), y, y + spec.d);
    });
    CHECK(streamed == enumerate_sphere(spec));
}

TEST_CASE("residue decomposition partitions the sphere") {
    SUBCASE("mod 2 in dimension four splits 24 points into two classes") {
        auto rc = residue_class_counts({4, 4}, 2);
        CHECK(as_u64(rc.total) == 24);
        REQUIRE(rc.orbits.size() == 2);
        CHECK(rc.orbits[0].canonical == std::vector<std::int32_t>{0, 0, 0, 0});
        CHECK(rc.orbits[0].orbit_size == 1);
        CHECK(as_u64(rc.orbits[0].count) == 8);
        CHECK(rc.orbits[1].canonical == std::vector<std::int32_t>{1, 1, 1, 1});
        CHECK(rc.orbits[1].orbit_size == 1);
        CHECK(as_u64(rc.orbits[1].count) == 16);
    }

    SUBCASE("orbit masses always sum to the full count") {
        struct Case { int d; std::int64_t lam; std::int64_t m; };
        for (auto [d, lam, m] : {Case{4, 25, 3}, Case{5, 12, 4}, Case{4, 48, 8}, Case{6, 10, 5}}) {
            auto rc = residue_class_counts({d, lam}, m);
            CAPTURE(d);
            CAPTURE(lam);
            CAPTURE(m);
            Count mass = 0;
            for (const auto& orb : rc.orbits)
                mass = checked_add(mass, checked_mul_u64(orb.count, orb.orbit_size));
            CHECK(as_u64(mass) == as_u64(count_reps({d, lam})));
        }
    }

    SUBCASE("expanded orbits are distinct, ordered, and the right size") {
        auto rc = residue_class_counts({4, 25, }, 3);
        for (const auto& orb : rc.orbits) {
            auto vecs = expand_orbit(orb, 3);
            REQUIRE(vecs.size() == orb.orbit_size);
            CHECK(std::is_sorted(vecs.begin(), vecs.end()));
            CHECK(std::adjacent_find(vecs.begin(), vecs.end()) == vecs.end());
            for (const auto& v : vecs) {
                auto canon = v;
                for (auto& r : canon) r = std::min(r, std::int32_t(3 - r));
                std::sort(canon.begin(), canon.end());
                CHECK(canon == orb.canonical);
            }
        }
    }
}

TEST_CASE("table lookups match one-shot counts") {
    auto table = count_reps_upto(5, 50);
    for (std::int64_t lam = 0; lam <= 50; ++lam)
        CHECK(as_u64(table.at(lam)) == as_u64(count_reps({5, lam})));
    CHECK(code_of([&] { table.at(51); }) == errc::invalid_argument);
    CHECK(code_of([&] { table.at(-1); }) == errc::invalid_argument);
}

TEST_CASE("sieve is deterministic across thread counts") {
    Caps par;
    par.threads = 4;
    auto a = count_reps_upto(5, 4000);
    auto b = count_reps_upto(5, 4000, par);
    REQUIRE(a.counts.size() == b.counts.size());
    for (std::size_t i = 0; i < a.counts.size(); ++i) CHECK(a.counts[i] == b.counts[i]);
}

TEST_CASE("lattice error taxonomy") {
    CHECK(code_of([] { count_reps({0, 5}); }) == errc::invalid_argument);
    CHECK(code_of([] { count_reps({4, -1}); }) == errc::invalid_argument);

    Caps tiny;
    tiny.max_sphere_points = 10;
    CHECK(code_of([&] { enumerate_sphere({4, 2}, tiny); }) == errc::cap_exceeded);

    Caps starved;
    starved.max_sieve_work = 1000;
    CHECK(code_of([&] { count_reps_upto(5, 1000000, starved); }) == errc::budget_exceeded);

    CHECK(code_of([] { residue_class_counts({4, 4}, 1); }) == errc::invalid_argument);
    CHECK(code_of([] { residue_class_counts({4, 4}, 100); }) == errc::cap_exceeded);

    Caps bad;
    bad.threads = 0;
    CHECK(code_of([&] { count_reps_upto(4, 10, bad); }) == errc::invalid_argument);
}

TEST_CASE("primality helper") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(97));
    CHECK(is_prime(7919));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(-7));
    CHECK_FALSE(is_prime(91));
    CHECK_FALSE(is_prime(4096));
}
