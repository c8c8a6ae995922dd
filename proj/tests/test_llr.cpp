#include <doctest.h>

#include <cmath>
#include <limits>

#include "keysim/errors.hpp"
#include "keysim/llr.hpp"
#include "keysim/quantize.hpp"
#include "keysim/rng.hpp"

using namespace keysim;

namespace {

// Gaussian tail by adaptive-step Simpson integration, independent of the
// erfc-based implementation.
double q_by_quadrature(double x) {
    const double lo = x, hi = x + 12.0;
    const int steps = 20000; // even
    const double h = (hi - lo) / steps;
    auto pdf = [](double t) {
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979323846);
    };
    double sum = pdf(lo) + pdf(hi);
    for (int i = 1; i < steps; ++i)
        sum += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace

TEST_SUITE("llr") {

TEST_CASE("bpsk exact form") {
    CHECK(llr_bpsk_exact(0.0, 1.0, 0.5) == 0.0);
    CHECK(std::abs(llr_bpsk_exact(1.0, 1.0, 0.5) - 4.0) < 1e-9);

    // Denominator exponent -1000 underflows: the literal evaluation blows up.
    const double pathological = llr_bpsk_exact(1.0, 1.0, 0.002);
    CHECK(std::isinf(pathological));
    CHECK(pathological > 0.0);
    const double negated = llr_bpsk_exact(-1.0, 1.0, 0.002);
    CHECK(std::isinf(negated));
    CHECK(negated < 0.0);

    CHECK_THROWS_AS(llr_bpsk_exact(1.0, 0.0, 0.5), input_error);
    CHECK_THROWS_AS(llr_bpsk_exact(1.0, 1.0, 0.0), input_error);
}

TEST_CASE("bpsk approximate form") {
    CHECK(llr_bpsk_approx(0.0, 1.0, 0.5) == 0.0);
    CHECK(llr_bpsk_approx(1.0, 1.0, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(llr_bpsk_approx(-0.25, 1.0, 0.1) == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("exact and approximate forms agree outside the underflow region") {
    // log-spaced sigma2 in [0.01, 1], linear b in [-4, 4]; points whose
    // exponents would underflow are exactly the documented failure corner.
    std::size_t checked = 0, skipped = 0;
    for (int i = 0; i < 60; ++i) {
        const double sigma2 = 0.01 * std::pow(100.0, i / 59.0);
        for (int j = 0; j < 60; ++j) {
            const double b = -4.0 + 8.0 * j / 59.0;
            const double worst = (std::abs(b) + 1.0) * (std::abs(b) + 1.0) / (2.0 * sigma2);
            if (worst >= 700.0) {
                ++skipped;
                continue;
            }
            ++checked;
            const double exact = llr_bpsk_exact(b, 1.0, sigma2);
            const double approx = llr_bpsk_approx(b, 1.0, sigma2);
            REQUIRE(std::abs(exact - approx) <= 1e-9);
        }
    }
    CHECK(checked > 30 * skipped); // the guarded corner is small
}

TEST_CASE("exact form breaks down where the approximation stays finite") {
    for (double b : {1.0, 2.0, 4.0}) {
        for (double sigma2 : {0.002, 0.001}) {
            CHECK(!std::isfinite(llr_bpsk_exact(b, 1.0, sigma2)));
            CHECK(std::isfinite(llr_bpsk_approx(b, 1.0, sigma2)));
        }
    }
}

TEST_CASE("q_function reference values") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(-8.0) > 1.0 - 1e-15);

    // Frozen high-precision tail values.
    CHECK(q_function(0.5) == doctest::Approx(0.308537538725987).epsilon(1e-12));
    CHECK(q_function(1.0) == doctest::Approx(0.158655253931457).epsilon(1e-12));
    CHECK(q_function(2.0) == doctest::Approx(0.0227501319481792).epsilon(1e-12));
    CHECK(q_function(3.0) == doctest::Approx(0.00134989803163009).epsilon(1e-12));
    CHECK(q_function(5.0) == doctest::Approx(2.86651571879194e-7).epsilon(1e-12));
    CHECK(q_function(8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-12));

    // Independent quadrature oracle.
    CHECK(std::abs(q_function(1.0) - q_by_quadrature(1.0)) < 1e-6);
}

TEST_CASE("log_q stays accurate across its branch point") {
    for (double x : {-8.0, -2.0, 0.0, 1.0, 8.0, 19.5, 29.9}) {
        CHECK(log_q(x) == doctest::Approx(std::log(q_function(x))).epsilon(1e-12));
    }
    // The asymptotic branch agrees with the erfc path while both are valid,
    // and stays finite far past erfc underflow.
    for (double x : {30.5, 33.0, 36.0})
        CHECK(std::abs(log_q(x) - std::log(q_function(x))) < 1e-8);
    CHECK(std::isfinite(log_q(45.0)));
    CHECK(std::isfinite(log_q(200.0)));
}

TEST_CASE("proposed channel llr") {
    CHECK(llr_channel_proposed(0.0, 1.0) == 0.0);

    // f = sqrt(v): ln(Q(-1) / (1 - Q(-1))).
    const double reference = 1.66826786598581;
    CHECK(std::abs(llr_channel_proposed(2.0, 4.0) - reference) < 1e-3);
    CHECK(llr_channel_proposed(2.0, 4.0) == doctest::Approx(reference).epsilon(1e-12));
    CHECK(llr_channel_proposed(-2.0, 4.0) == doctest::Approx(-reference).epsilon(1e-12));

    CHECK_THROWS_AS(llr_channel_proposed(1.0, 0.0), input_error);
    CHECK_THROWS_AS(llr_channel_proposed(std::numeric_limits<double>::infinity(), 1.0),
                    input_error);
}

TEST_CASE("proposed llr is odd and strictly increasing") {
    const double v = 0.37;
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1600; ++i) {
        const double f = (-8.0 + i / 100.0) * std::sqrt(v);
        const double value = llr_channel_proposed(f, v);
        CHECK(std::abs(value + llr_channel_proposed(-f, v)) <= 1e-10);
        REQUIRE(value > prev);
        prev = value;
    }
}

TEST_CASE("proposed llr sign matches the hard decision") {
    RngStream rng(6);
    for (int i = 0; i < 10000; ++i) {
        const double f = 3.0 * rng.gaussian();
        if (f == 0.0)
            continue;
        const double value = llr_channel_proposed(f, 0.8);
        // positive LLR <=> Bob's own hard decision would be bit 0
        CHECK((value > 0.0) == (quantize_bit(f) == 0));
    }
}

TEST_CASE("proposed llr never overflows even deep in the tails") {
    for (double f : {1e3, 1e6, 1e154, -1e154, 1.7e308, -1.7e308}) {
        const double value = llr_channel_proposed(f, 1.0);
        CHECK(std::isfinite(value));
        CHECK((value > 0.0) == (f > 0.0));
    }
}

TEST_CASE("saturate clamps and repairs non-finite values") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    LlrVector v;
    v.values = {inf, -3.0, 0.5};
    const auto s = saturate(v, 20.0);
    CHECK(s.values == std::vector<double>{20.0, -3.0, 0.5});
    CHECK(s.saturation == 20.0);

    LlrVector w;
    w.values = {nan, -inf, 55.0, -55.0, 1.0};
    const auto t = saturate(w, 50.0);
    CHECK(t.values == std::vector<double>{0.0, -50.0, 50.0, -50.0, 1.0});

    LlrVector u;
    u.values = {-1.5, 0.0, 3.0};
    CHECK(saturate(u, 10.0).values == u.values); // already inside the bound

    CHECK_THROWS_AS(saturate(u, 0.0), config_error);
}

} // TEST_SUITE
