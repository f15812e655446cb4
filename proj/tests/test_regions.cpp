#include <doctest.h>

#include <random>

#include "br/regions.hpp"

using namespace br;

TEST_CASE("region classification examples") {
    CHECK(classify(RegionPoint(0.5, 0.1, 2)) == Region::Omega);
    CHECK(classify(RegionPoint(1.0, 0.25, 2)) == Region::Gamma);
    for (double inv_p : {0.0, 0.2, 0.5, 0.9, 1.0})
        CHECK(classify(RegionPoint(inv_p, 1.0, 1)) == Region::Sigma);

    // Gamma keeps its upper boundary, Sigma starts strictly above it
    CHECK(classify(RegionPoint(1.0, 0.5, 2)) == Region::Gamma);
    CHECK(classify(RegionPoint(1.0, 0.5 + 1e-12, 2)) == Region::Sigma);
    // p = infinity is inv_p = 0: threshold is (d-1)/2
    CHECK(classify(RegionPoint(0.0, 0.5, 2)) == Region::Gamma);
    CHECK(classify(RegionPoint(0.0, 0.51, 2)) == Region::Sigma);

    CHECK_THROWS_AS(RegionPoint(-0.1, 0.0, 2), bad_config);
    CHECK_THROWS_AS(RegionPoint(0.5, -0.1, 2), bad_config);
    CHECK_THROWS_AS(RegionPoint(0.5, 0.1, 0), bad_config);
}

TEST_CASE("region partition on random points") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        int d = 1 + static_cast<int>(rng() % 4);
        RegionPoint pt(3.0 * U(rng), 3.0 * U(rng), d);
        int hits = (in_sigma(pt) ? 1 : 0) + (in_gamma(pt) ? 1 : 0) + (in_omega(pt) ? 1 : 0);
        REQUIRE(hits == 1);
        REQUIRE(!(in_sigma(pt) && in_gamma(pt)));
        Region r = classify(pt);
        REQUIRE(r != Region::None);
        // Sigma is upward closed in delta
        if (r == Region::Sigma) {
            RegionPoint up(pt.inv_p, pt.delta + 2.0 * U(rng) + 1e-9, d);
            REQUIRE(in_sigma(up));
        }
    }
}

TEST_CASE("b region membership") {
    CHECK(in_b_region(2.0, 2.0, 1));
    CHECK_FALSE(in_b_region(2.0, 3.0, 1));
    CHECK_FALSE(in_b_region(2.0, 2.0, 3));
    CHECK(in_b_region(0.5, 2.0, 3));       // (1/p - 1)_+ = 0
    CHECK(in_b_region(2.0, 4.0, 3));       // 4 > 3
    CHECK_FALSE(in_b_region(2.0, 2.0000001, 1));  // not an even integer
    CHECK_FALSE(in_b_region(3.0, 2.0, 1)); // 2 > 2 fails
    CHECK_THROWS_AS(in_b_region(2.0, 0.0, 1), bad_config);
}

TEST_CASE("verdict table") {
    // p >= 1: region decides, beta irrelevant
    {
        Verdict v = verdict(RegionPoint(1.0, 2.0, 2), 1.0, Exponent(1.0));
        CHECK(v.region == Region::Sigma);
        CHECK(v.means_converge == Convergence::yes);
        CHECK(v.family_converge == Convergence::yes);
        Verdict w = verdict(RegionPoint(1.0, 2.0, 2), 3.7, Exponent(1.0));
        CHECK(w.family_converge == Convergence::yes);
    }
    {
        Verdict v = verdict(RegionPoint(1.0, 0.25, 2), 2.0, Exponent(1.0));
        CHECK(v.region == Region::Gamma);
        CHECK(v.means_converge == Convergence::no);
        CHECK(v.family_converge == Convergence::no);
    }
    {
        Verdict v = verdict(RegionPoint(0.5, 0.1, 2), 2.0, Exponent(2.0));
        CHECK(v.region == Region::Omega);
        CHECK(v.means_converge == Convergence::unknown);
        CHECK(v.family_converge == Convergence::unknown);
    }
    {
        Verdict v = verdict(RegionPoint(0.0, 3.0, 2), 2.0, Exponent::infinity());
        CHECK(v.means_converge == Convergence::yes);
    }
    // p < 1: family needs Sigma and B, means not applicable
    {
        Verdict v = verdict(RegionPoint(2.0, 3.0, 1), 2.0, Exponent(0.5));
        CHECK(v.region == Region::Sigma);  // threshold max{0, 1(2-1/2)-1/2} = 1 < 3
        CHECK(v.means_converge == Convergence::not_applicable);
        CHECK(v.family_converge == Convergence::yes);
    }
    {
        Verdict v = verdict(RegionPoint(2.0, 3.0, 1), 1.0, Exponent(0.5));
        CHECK(v.family_converge == Convergence::no);
    }
    {
        // below Sigma: delta = 1 <= 3/2 in d=1 at p = 1/2
        Verdict v = verdict(RegionPoint(2.0, 1.0, 1), 2.0, Exponent(0.5));
        CHECK(v.family_converge == Convergence::no);
    }
    CHECK_THROWS_AS(verdict(RegionPoint(0.5, 1.0, 2), 2.0, Exponent(1.0)), bad_config);
}

TEST_CASE("region names") {
    CHECK(std::string(to_string(Region::Sigma)) == "Sigma");
    CHECK(std::string(to_string(Convergence::not_applicable)) == "not_applicable");
}
