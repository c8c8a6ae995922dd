#include "keysim/quantize.hpp"

#include <cmath>
#include <string>

#include "keysim/errors.hpp"

namespace keysim {

std::uint8_t quantize_bit(double e) {
    if (!std::isfinite(e))
        throw input_error("quantize_bit: non-finite sample");
    return e > 0.0 ? 0 : 1;
}

std::vector<double> component_stream(const std::vector<ChannelObservation>& observations,
                                     Side side) {
    if (observations.empty())
        throw input_error("component_stream: empty observation list");
    std::vector<double> stream;
    stream.reserve(2 * observations.size());
    for (const auto& obs : observations) {
        const std::complex<double>* x = nullptr;
        switch (side) {
        case Side::alice: x = &obs.a; break;
        case Side::bob: x = &obs.b; break;
        case Side::eve_alice: x = &obs.e_alice; break;
        case Side::eve_bob: x = &obs.e_bob; break;
        }
        stream.push_back(x->real());
        stream.push_back(x->imag());
    }
    return stream;
}

CensorResult censor(const std::vector<double>& samples, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw config_error("censor: gamma must be non-negative, got " + std::to_string(gamma));
    CensorResult result;
    result.kept.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (std::abs(samples[i]) <= gamma)
            result.censored_indices.push_back(i);
        else
            result.kept.emplace_back(i, samples[i]);
    }
    return result;
}

KeyMaterial alice_key(const std::vector<double>& samples, QuantizeScheme scheme,
                      double gamma) {
    KeyMaterial key;
    key.scheme = scheme;
    if (scheme == QuantizeScheme::censoring) {
        key.gamma = gamma;
        CensorResult cr = censor(samples, gamma);
        key.censored_indices = std::move(cr.censored_indices);
        key.bits.reserve(cr.kept.size());
        for (const auto& [idx, value] : cr.kept)
            key.bits.push_back(quantize_bit(value));
    } else {
        key.bits.reserve(samples.size());
        for (double value : samples)
            key.bits.push_back(quantize_bit(value));
    }
    return key;
}

} // namespace keysim
