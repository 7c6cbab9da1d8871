#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "probes.hpp"

using namespace sphlab;
using testutil::code_of;

namespace {

SequenceTruncation ints(std::vector<std::int64_t> ts) {
    std::vector<BigInt> terms(ts.begin(), ts.end());
    return make_sequence("ad-hoc", std::move(terms));
}

}  // namespace

TEST_CASE("point-mass closed forms") {
    SUBCASE("two disjoint spheres in dimension five at p = 2") {
        auto r = delta_test(5, ints({1, 2}), 2.0);
        // r_5(1) = 10, r_5(2) = 40: sqrt(1/10 + 1/40) = sqrt(0.125)
        CHECK(r.closed_form == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));
        REQUIRE(r.direct.has_value());
        REQUIRE(r.relative_gap.has_value());
        CHECK(*r.relative_gap <= 1e-14);
        CHECK(r.term_count == 2);
        CHECK(r.max_lambda == 2);
    }

    SUBCASE("single sphere at p = 3") {
        auto r = delta_test(5, ints({1}), 3.0);
        CHECK(r.closed_form == doctest::Approx(std::pow(10.0, -2.0 / 3.0)).epsilon(1e-15));
    }

    SUBCASE("p = 1 counts the spheres exactly") {
        for (auto& terms : {std::vector<std::int64_t>{1, 2, 3},
                            std::vector<std::int64_t>{4, 9, 25, 49, 100}}) {
            auto r = delta_test(5, ints(terms), 1.0);
            CHECK(r.closed_form == static_cast<double>(terms.size()));
            if (r.direct) CHECK(*r.relative_gap <= 1e-12);
        }
    }

    SUBCASE("closed form and grid evaluation agree across dimensions") {
        struct Case { int d; std::vector<std::int64_t> terms; };
        for (auto& [d, terms] : {Case{4, {1, 4, 9, 16, 25}}, Case{5, {1, 2, 3, 4, 5}},
                                 Case{6, {1, 2, 3}}}) {
            for (double p : {1.0, 1.25, 1.5, 2.0}) {
                auto r = delta_test(d, ints(terms), p);
                CAPTURE(d);
                CAPTURE(p);
                REQUIRE(r.direct.has_value());
                CHECK(*r.relative_gap <= 1e-10);
            }
        }
    }

    SUBCASE("the bound is nonincreasing in p") {
        auto seq = ints({1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12});
        auto rs = delta_test_multi(5, seq, {1.0, 1.25, 1.5, 2.0, 3.0}, {}, false);
        for (std::size_t i = 0; i + 1 < rs.size(); ++i)
            CHECK(rs[i].closed_form >= rs[i + 1].closed_form);
    }

    SUBCASE("the grid pass is skipped when it would exceed the point cap") {
        Caps tiny;
        tiny.max_sphere_points = 10;
        auto r = delta_test(5, ints({1, 2}), 2.0, tiny);
        CHECK_FALSE(r.direct.has_value());
        CHECK_FALSE(r.notes.empty());
        CHECK(r.closed_form == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));

        auto quiet = delta_test(5, ints({1, 2}), 2.0, tiny, false);
        CHECK_FALSE(quiet.direct.has_value());
        CHECK(quiet.notes.empty());
    }

    SUBCASE("validation") {
        CHECK(code_of([] { delta_test(3, ints({1}), 2.0); }) == errc::dimension_too_small);
        CHECK(code_of([] { delta_test(5, ints({1}), 0.5); }) == errc::invalid_exponent);
        CHECK(code_of([] { delta_test(5, ints({1}), std::nan("")); }) == errc::invalid_exponent);
        CHECK(code_of([] { delta_test_multi(5, ints({1}), {}); }) == errc::invalid_argument);
        CHECK(code_of([] {
                  delta_test(5, make_geometric(2, 80), 2.0);
              }) == errc::cap_exceeded);  // 2^79 cannot be a sphere radius
    }
}

TEST_CASE("partial-sum slope probe") {
    SUBCASE("full sequence in dimension five") {
        auto seq = make_naturals(1000);
        const std::vector<std::int64_t> schedule = {100, 200, 500, 1000};
        auto mid = divergence_slope(5, seq, true, schedule, 1.5);
        CHECK(mid.slope == doctest::Approx(0.24773728631207861).epsilon(1e-12));
        REQUIRE(mid.values.size() == 4);
        CHECK(mid.values[0] == doctest::Approx(2.3647149040110418).epsilon(1e-12));
        CHECK(mid.values[3] == doctest::Approx(3.4587369228657545).epsilon(1e-12));
        REQUIRE(mid.log_sums.size() == 4);

        auto flat = divergence_slope(5, seq, true, schedule, 2.0);
        CHECK(flat.slope == doctest::Approx(0.0039996015639720064).epsilon(1e-12));

        auto no_id = divergence_slope(5, seq, false, schedule, 1.5);
        CHECK(std::fabs(no_id.slope - mid.slope) > 0.01);
    }

    SUBCASE("a sequence past the last bound is reported, terms before count") {
        auto r = divergence_slope(5, ints({1, 2, 3, 50}), true, {4, 8, 16, 32}, 1.5);
        CHECK_FALSE(r.notes.empty());  // the term 50 never enters any partial sum
        CHECK(r.values.size() == 4);
    }

    SUBCASE("identity-only partial sums have zero slope") {
        auto r = divergence_slope(5, ints({100}), true, {1, 2, 4, 8}, 1.5);
        CHECK(r.slope == 0.0);
    }

    SUBCASE("validation") {
        auto seq = make_naturals(100);
        CHECK(code_of([&] { divergence_slope(4, seq, true, {1, 2, 3, 4}, 1.5); }) ==
              errc::dimension_too_small);
        CHECK(code_of([&] { divergence_slope(5, seq, true, {1, 2, 3}, 1.5); }) ==
              errc::invalid_argument);
        CHECK(code_of([&] { divergence_slope(5, seq, true, {1, 2, 2, 4}, 1.5); }) ==
              errc::invalid_argument);
        CHECK(code_of([&] { divergence_slope(5, seq, true, {0, 1, 2, 4}, 1.5); }) ==
              errc::invalid_argument);
        CHECK(code_of([&] { divergence_slope(5, seq, true, {1, 2, 3, 4}, 0.9); }) ==
              errc::invalid_exponent);
        CHECK(code_of([&] {
                  divergence_slope(5, ints({100}), false, {1, 2, 4, 8}, 1.5);
              }) == errc::invalid_argument);  // no mass in any partial sum
    }
}

TEST_CASE("periodic residue probe") {
    SUBCASE("one sphere mod two in dimension four") {
        auto r = periodic_padic_probe(4, ints({4}), 2, 1, 2.0);
        REQUIRE(r.ratios.size() == 1);
        // classes 0000 and 1111 carry 8 and 16 of the 24 points
        CHECK(r.ratios[0] == doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-14));
        CHECK(r.stages == std::vector<int>{1});
        CHECK_FALSE(r.notes.empty());  // single stage: no slope fit
    }

    SUBCASE("averaging normalization makes q = 1 ratios exactly one") {
        for (std::int64_t lam : {1, 2, 4, 5}) {
            auto r = periodic_padic_probe(5, ints({lam}), 2, 1, 1.0);
            CAPTURE(lam);
            CHECK(r.ratios[0] == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    SUBCASE("single-sphere ratios never exceed one") {
        for (std::int64_t lam : {1, 3, 6}) {
            for (double q : {1.0, 1.5, 2.0}) {
                auto r = periodic_padic_probe(4, ints({lam}), 2, 2, q);
                CAPTURE(lam);
                CAPTURE(q);
                for (double ratio : r.ratios) CHECK(ratio <= 1.0 + 1e-12);
            }
        }
    }

    SUBCASE("more spheres never shrink the ratio") {
        auto lone = periodic_padic_probe(4, ints({4}), 2, 1, 2.0);
        auto pair = periodic_padic_probe(4, ints({1, 4}), 2, 1, 2.0);
        CHECK(pair.ratios[0] >= lone.ratios[0] - 1e-15);
    }

    SUBCASE("a two-adic cover concentrates as the level grows") {
        auto seq = make_padic_cover(2, 2, 1.4, 7);
        auto r = periodic_padic_probe(5, seq, 2, 2, 1.1);
        REQUIRE(r.ratios.size() == 2);
        CHECK(r.ratios[1] > r.ratios[0]);
        CHECK(r.slope > 0.0);
    }

    SUBCASE("deterministic across worker counts") {
        Caps par;
        par.threads = 4;
        auto seq = make_padic_cover(2, 2, 1.4, 7);
        auto a = periodic_padic_probe(5, seq, 2, 2, 1.1);
        auto b = periodic_padic_probe(5, seq, 2, 2, 1.1, par);
        CHECK(a.ratios == b.ratios);
        CHECK(a.slope == b.slope);
    }

    SUBCASE("validation") {
        CHECK(code_of([] { periodic_padic_probe(3, ints({1}), 2, 1, 1.0); }) ==
              errc::dimension_too_small);
        CHECK(code_of([] { periodic_padic_probe(4, ints({1}), 6, 1, 1.0); }) == errc::not_prime);
        CHECK(code_of([] { periodic_padic_probe(4, ints({1}), 2, 0, 1.0); }) ==
              errc::invalid_argument);
        CHECK(code_of([] { periodic_padic_probe(4, ints({1}), 2, 1, 0.5); }) ==
              errc::invalid_exponent);
        CHECK(code_of([] { periodic_padic_probe(5, ints({1}), 7, 4, 1.0); }) ==
              errc::cap_exceeded);  // 7^20 torus cells
    }
}

TEST_CASE("sequence radii conversion") {
    auto radii = sequence_radii(make_squares(100));
    CHECK(radii == std::vector<std::int64_t>{1, 4, 9, 16, 25, 36, 49, 64, 81, 100});
    CHECK(code_of([] { sequence_radii(make_geometric(2, 80)); }) == errc::cap_exceeded);
}
