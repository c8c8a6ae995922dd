#include "keysim/channel.hpp"

#include <cmath>
#include <string>

#include "keysim/errors.hpp"

namespace keysim {

double ChannelConfig::snr_db() const {
    return 10.0 * std::log10(sigma2_h / sigma2_w);
}

ChannelConfig ChannelConfig::from_snr_db(double snr_db, double sigma2_h) {
    ChannelConfig cfg;
    cfg.sigma2_h = sigma2_h;
    cfg.sigma2_w = sigma2_h / std::pow(10.0, snr_db / 10.0);
    cfg.validate();
    return cfg;
}

void ChannelConfig::validate() const {
    if (!(sigma2_h > 0.0) || !std::isfinite(sigma2_h))
        throw config_error("sigma2_h must be positive, got " + std::to_string(sigma2_h));
    if (!(sigma2_w >= 0.0) || !std::isfinite(sigma2_w))
        throw config_error("sigma2_w must be non-negative, got " + std::to_string(sigma2_w));
}

namespace {

std::complex<double> complex_gaussian(double component_variance, RngStream& rng) {
    const double s = std::sqrt(component_variance);
    const double re = s * rng.gaussian();
    const double im = s * rng.gaussian();
    return {re, im};
}

} // namespace

ChannelObservation sample_observation(const ChannelConfig& cfg, RngStream& rng) {
    cfg.validate();
    ChannelObservation obs;
    const auto h = complex_gaussian(cfg.sigma2_h, rng);
    obs.a = h + complex_gaussian(cfg.sigma2_w, rng);
    obs.b = h + complex_gaussian(cfg.sigma2_w, rng);
    // Eve sits several wavelengths away from both nodes: her gains are drawn
    // independently of h and of each other.
    obs.e_alice = complex_gaussian(cfg.sigma2_h, rng) + complex_gaussian(cfg.sigma2_w, rng);
    obs.e_bob = complex_gaussian(cfg.sigma2_h, rng) + complex_gaussian(cfg.sigma2_w, rng);
    return obs;
}

std::vector<ChannelObservation> sample_block(const ChannelConfig& cfg,
                                             std::size_t n_samples, RngStream& rng) {
    if (n_samples == 0)
        throw input_error("sample_block: n_samples must be at least 1");
    cfg.validate();
    std::vector<ChannelObservation> block;
    block.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        block.push_back(sample_observation(cfg, rng));
    return block;
}

std::vector<double> bpsk_awgn(const std::vector<double>& symbols, double energy,
                              double sigma2, RngStream& rng) {
    if (!(energy > 0.0))
        throw input_error("bpsk_awgn: energy must be positive");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw input_error("bpsk_awgn: sigma2 must be non-negative");
    const double amp = std::sqrt(energy);
    std::vector<double> out;
    out.reserve(symbols.size());
    const double s = std::sqrt(sigma2);
    for (double x : symbols) {
        if (x != amp && x != -amp)
            throw input_error("bpsk_awgn: symbol " + std::to_string(x) +
                              " is not in {+sqrt(E), -sqrt(E)}");
        out.push_back(sigma2 == 0.0 ? x : x + s * rng.gaussian());
    }
    return out;
}

} // namespace keysim
