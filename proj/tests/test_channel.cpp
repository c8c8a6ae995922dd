#include <doctest.h>

#include <cmath>

#include "keysim/channel.hpp"
#include "keysim/errors.hpp"
#include "keysim/quantize.hpp"

using namespace keysim;

TEST_SUITE("channel") {

TEST_CASE("config validation and snr consistency") {
    ChannelConfig negative_gain{-1.0, 0.1};
    CHECK_THROWS_AS(negative_gain.validate(), config_error);
    ChannelConfig zero_gain{0.0, 0.1};
    CHECK_THROWS_AS(zero_gain.validate(), config_error);
    ChannelConfig negative_noise{0.5, -0.1};
    CHECK_THROWS_AS(negative_noise.validate(), config_error);

    for (double snr : {-3.0, 0.0, 7.5, 20.0}) {
        const auto cfg = ChannelConfig::from_snr_db(snr);
        CHECK(std::abs(cfg.snr_db() - snr) <= 1e-12 * std::max(1.0, std::abs(snr)));
    }
}

TEST_CASE("zero noise gives exact reciprocity") {
    ChannelConfig cfg{0.5, 0.0};
    RngStream rng(1);
    for (int i = 0; i < 100; ++i) {
        const auto obs = sample_observation(cfg, rng);
        CHECK(obs.a == obs.b);
    }
}

TEST_CASE("sample_block contract") {
    const auto cfg = ChannelConfig::from_snr_db(10.0);
    RngStream rng(5);
    CHECK(sample_block(cfg, 1, rng).size() == 1);
    CHECK_THROWS_AS(sample_block(cfg, 0, rng), input_error);

    RngStream r1(99), r2(99);
    const auto b1 = sample_block(cfg, 64, r1);
    const auto b2 = sample_block(cfg, 64, r2);
    for (std::size_t i = 0; i < b1.size(); ++i) {
        CHECK(b1[i].a == b2[i].a);
        CHECK(b1[i].b == b2[i].b);
        CHECK(b1[i].e_alice == b2[i].e_alice);
        CHECK(b1[i].e_bob == b2[i].e_bob);
    }
}

// One long pass over 10^6 observations checks the distributional claims
// together: component variance, reciprocity variance, Eve independence, the
// orthant disagreement probability against its closed form, and the lag-1
// autocorrelation of the i.i.d. construction.
TEST_CASE("large-sample statistics at 10 dB") {
    const double snr_db = 10.0;
    const auto cfg = ChannelConfig::from_snr_db(snr_db);
    RngStream rng(2024);

    const std::size_t n = 1000000;
    double sum_a = 0.0, sum_a2 = 0.0;
    double sum_diff2 = 0.0;
    double sum_ae = 0.0;
    std::size_t sign_disagree = 0, eve_disagree = 0;
    double prev = 0.0, sum_lag = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto obs = sample_observation(cfg, rng);
        const double ra = obs.a.real(), rb = obs.b.real(), re = obs.e_alice.real();
        sum_a += ra;
        sum_a2 += ra * ra;
        sum_diff2 += (ra - rb) * (ra - rb);
        sum_ae += ra * re;
        sign_disagree += quantize_bit(ra) != quantize_bit(rb);
        eve_disagree += quantize_bit(ra) != quantize_bit(re);
        if (i > 0)
            sum_lag += prev * ra;
        prev = ra;
    }

    const double var_expected = cfg.sigma2_h + cfg.sigma2_w;
    const double mean_a = sum_a / n;
    const double var_a = sum_a2 / n - mean_a * mean_a;
    CHECK(std::abs(var_a - var_expected) < 0.01 * var_expected);

    // a - b = w_a - w_b: the gain cancels, leaving variance 2*sigma2_w.
    const double var_diff = sum_diff2 / n;
    CHECK(std::abs(var_diff - 2.0 * cfg.sigma2_w) < 0.02 * 2.0 * cfg.sigma2_w);

    // Eve's estimate is uncorrelated with Alice's.
    const double corr_ae = (sum_ae / n) / var_expected;
    CHECK(std::abs(corr_ae) < 0.01);
    CHECK(std::abs(eve_disagree / static_cast<double>(n) - 0.5) < 0.005);

    // Orthant probability: P(sign mismatch) = arccos(rho)/pi, rho = s/(s+1).
    const double s = std::pow(10.0, snr_db / 10.0);
    const double p = std::acos(s / (s + 1.0)) / 3.14159265358979323846;
    const double tol = 3.0 * std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(sign_disagree / static_cast<double>(n) - p) < tol);

    const double lag1 = (sum_lag / (n - 1)) / var_expected;
    CHECK(std::abs(lag1) < 0.01);
}

TEST_CASE("bpsk_awgn contract") {
    RngStream rng(3);
    const double energy = 1.0;

    SUBCASE("zero noise is the identity") {
        const std::vector<double> symbols{1.0, -1.0, 1.0};
        CHECK(bpsk_awgn(symbols, energy, 0.0, rng) == symbols);
    }

    SUBCASE("constellation is enforced") {
        CHECK_THROWS_AS(bpsk_awgn({0.5}, energy, 0.1, rng), input_error);
        CHECK_THROWS_AS(bpsk_awgn({1.0, 0.0}, energy, 0.1, rng), input_error);
    }

    SUBCASE("noise moments") {
        const double sigma2 = 0.25;
        const std::size_t n = 1000000;
        std::vector<double> symbols(n, 1.0);
        const auto out = bpsk_awgn(symbols, energy, sigma2, rng);
        double sum = 0.0, sum_n2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += out[i];
            const double noise = out[i] - symbols[i];
            sum_n2 += noise * noise;
        }
        const double mean = sum / n;
        CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(sigma2 / n));
        const double var = sum_n2 / n;
        CHECK(std::abs(var - sigma2) < 0.01 * sigma2);
    }
}

} // TEST_SUITE
