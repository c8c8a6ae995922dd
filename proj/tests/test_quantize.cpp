#include <doctest.h>

#include <cmath>
#include <limits>

#include "keysim/errors.hpp"
#include "keysim/harness.hpp"
#include "keysim/quantize.hpp"

using namespace keysim;

TEST_SUITE("quantize") {

TEST_CASE("quantize_bit sign rule") {
    CHECK(quantize_bit(0.73) == 0);
    CHECK(quantize_bit(-0.5) == 1);
    CHECK(quantize_bit(0.0) == 1); // tie maps to bit 1
    CHECK_THROWS_AS(quantize_bit(std::numeric_limits<double>::quiet_NaN()), input_error);
    CHECK_THROWS_AS(quantize_bit(std::numeric_limits<double>::infinity()), input_error);

    RngStream rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double e = rng.gaussian();
        if (e != 0.0)
            CHECK(quantize_bit(-e) == 1 - quantize_bit(e));
    }
}

TEST_CASE("component_stream interleaves re/im") {
    std::vector<ChannelObservation> obs(1);
    obs[0].a = {0.3, -0.4};
    obs[0].b = {1.0, 2.0};
    const auto alice = component_stream(obs, Side::alice);
    CHECK(alice == std::vector<double>{0.3, -0.4});
    const auto bob = component_stream(obs, Side::bob);
    CHECK(bob == std::vector<double>{1.0, 2.0});

    obs.push_back(obs[0]);
    obs[1].a = {5.0, 6.0};
    const auto two = component_stream(obs, Side::alice);
    CHECK(two == std::vector<double>{0.3, -0.4, 5.0, 6.0});

    CHECK_THROWS_AS(component_stream({}, Side::alice), input_error);
}

TEST_CASE("censor basic rule") {
    const auto r = censor({0.05, -0.2, 0.3}, 0.1);
    REQUIRE(r.kept.size() == 2);
    CHECK(r.kept[0] == std::pair<std::size_t, double>{1, -0.2});
    CHECK(r.kept[1] == std::pair<std::size_t, double>{2, 0.3});
    CHECK(r.censored_indices == std::vector<std::size_t>{0});

    const auto z = censor({0.0, -0.2, 0.1}, 0.0);
    CHECK(z.censored_indices == std::vector<std::size_t>{0}); // only exact zeros

    CHECK_THROWS_AS(censor({1.0}, -0.1), config_error);
}

TEST_CASE("censor partitions the index set") {
    RngStream rng(8);
    std::vector<double> samples(997);
    for (auto& s : samples)
        s = rng.gaussian();
    const auto r = censor(samples, 0.3);
    std::vector<bool> seen(samples.size(), false);
    for (const auto& [idx, value] : r.kept) {
        CHECK(std::abs(value) > 0.3);
        CHECK(samples[idx] == value);
        seen[idx] = true;
    }
    std::size_t prev = 0;
    bool first = true;
    for (std::size_t idx : r.censored_indices) {
        CHECK(std::abs(samples[idx]) <= 0.3);
        if (!first)
            CHECK(idx > prev);
        prev = idx;
        first = false;
        CHECK(!seen[idx]);
        seen[idx] = true;
    }
    for (bool b : seen)
        CHECK(b);
}

TEST_CASE("censored fraction of a standard normal") {
    RngStream rng(77);
    const std::size_t n = 1000000;
    std::vector<double> samples(n);
    for (auto& s : samples)
        s = rng.gaussian();
    const auto r = censor(samples, 0.1);
    const double fraction = static_cast<double>(r.censored_indices.size()) / n;
    CHECK(std::abs(fraction - 0.0796556745540580) < 0.002); // 1 - 2Q(0.1)
}

TEST_CASE("alice_key composes censor and quantize") {
    const auto plain = alice_key({0.3, -0.1}, QuantizeScheme::one_bit);
    CHECK(plain.bits == std::vector<std::uint8_t>{0, 1});
    CHECK(plain.censored_indices.empty());

    const auto cens = alice_key({0.05, -0.2, 0.3}, QuantizeScheme::censoring, 0.1);
    CHECK(cens.bits == std::vector<std::uint8_t>{1, 0});
    CHECK(cens.censored_indices == std::vector<std::size_t>{0});

    // Censor-then-quantize equals quantize-then-delete on random data.
    RngStream rng(21);
    std::vector<double> samples(4096);
    for (auto& s : samples)
        s = rng.gaussian();
    const auto key = alice_key(samples, QuantizeScheme::censoring, 0.25);
    const auto all_bits = alice_key(samples, QuantizeScheme::one_bit);
    const auto cr = censor(samples, 0.25);
    REQUIRE(key.bits.size() == cr.kept.size());
    for (std::size_t t = 0; t < cr.kept.size(); ++t)
        CHECK(key.bits[t] == all_bits.bits[cr.kept[t].first]);
}

TEST_CASE("key bits are unbiased") {
    const auto cfg = ChannelConfig::from_snr_db(10.0);
    RngStream rng(303);
    const auto obs = sample_block(cfg, 500000, rng);
    const auto stream = component_stream(obs, Side::alice);
    const auto key = alice_key(stream, QuantizeScheme::one_bit);
    std::size_t ones = 0;
    for (auto b : key.bits)
        ones += b;
    CHECK(std::abs(ones / static_cast<double>(key.bits.size()) - 0.5) < 0.005);
}

TEST_CASE("censoring lowers the raw disagreement on kept indices") {
    for (double snr_db : {0.0, 10.0, 20.0}) {
        const auto cfg = ChannelConfig::from_snr_db(snr_db);
        const double gamma = 0.1 * 2.0 * cfg.sigma2_h;
        RngStream rng(snr_db == 0.0 ? 41 : snr_db == 10.0 ? 42 : 43);
        const auto obs = sample_block(cfg, 500000, rng);
        const auto alice = component_stream(obs, Side::alice);
        const auto bob = component_stream(obs, Side::bob);

        std::size_t disagree_all = 0;
        for (std::size_t i = 0; i < alice.size(); ++i)
            disagree_all += quantize_bit(alice[i]) != quantize_bit(bob[i]);

        const auto cr = censor(alice, gamma);
        std::size_t disagree_kept = 0;
        for (const auto& [idx, value] : cr.kept)
            disagree_kept += quantize_bit(value) != quantize_bit(bob[idx]);

        const double p_all = disagree_all / static_cast<double>(alice.size());
        const double p_kept = disagree_kept / static_cast<double>(cr.kept.size());
        CHECK(p_kept < p_all);
    }
}

TEST_CASE("censored count near full scale matches the analytic fraction") {
    const auto cfg = ChannelConfig::from_snr_db(12.0);
    RngStream rng(1712);
    const auto obs = sample_block(cfg, 16200, rng); // 32,400 components
    const auto stream = component_stream(obs, Side::alice);
    const double gamma = 0.1 * 2.0 * cfg.sigma2_h;
    const auto key = alice_key(stream, QuantizeScheme::censoring, gamma);

    const double expected_fraction = censor_probability(cfg.sigma2_h, cfg.sigma2_w, gamma);
    const double expected_censored = expected_fraction * 32400.0;
    const double realized = static_cast<double>(key.censored_indices.size());
    CHECK(std::abs(realized - expected_censored) < 0.02 * expected_censored);
    // ... which puts the censored key length in the neighborhood of 29,000
    // out of 32,400 at these settings.
    CHECK(key.bits.size() > 28300);
    CHECK(key.bits.size() < 29450);
}

} // TEST_SUITE
