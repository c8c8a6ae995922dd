#include <doctest.h>

#include <cmath>

#include "keysim/rng.hpp"

using keysim::RngStream;

TEST_SUITE("rng") {

TEST_CASE("identical ids replay the same sequence") {
    RngStream a(42, 7, 3, 1), b(42, 7, 3, 1);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct ids give distinct streams") {
    RngStream a(42, 0, 0, 0), b(42, 0, 0, 1), c(42, 0, 1, 0), d(43, 0, 0, 0);
    bool differs_b = false, differs_c = false, differs_d = false;
    for (int i = 0; i < 16; ++i) {
        const auto ref = a.next_u64();
        differs_b |= ref != b.next_u64();
        differs_c |= ref != c.next_u64();
        differs_d |= ref != d.next_u64();
    }
    CHECK(differs_b);
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("uniform stays inside (0, 1)") {
    RngStream rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("gaussian moments") {
    RngStream rng(1234);
    const int n = 400000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

} // TEST_SUITE
