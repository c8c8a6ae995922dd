#ifndef KEYSIM_QUANTIZE_HPP
#define KEYSIM_QUANTIZE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "keysim/channel.hpp"

namespace keysim {

enum class QuantizeScheme { one_bit, censoring };

// Which estimate a component stream is drawn from.
enum class Side { alice, bob, eve_alice, eve_bob };

// Alice's hard key bits plus the metadata Bob needs to line his samples up
// with hers.  Real and imaginary parts each contribute one component, so an
// uncensored stream of N observations yields 2N bits.
struct KeyMaterial {
    std::vector<std::uint8_t> bits;
    std::vector<std::size_t> censored_indices; // strictly increasing component indices
    QuantizeScheme scheme = QuantizeScheme::one_bit;
    double gamma = 0.0; // absolute censoring threshold (0 for one_bit)
};

// 0 for e > 0, 1 for e <= 0.  Non-finite input raises input_error.
std::uint8_t quantize_bit(double e);

// Interleaved [Re(x0), Im(x0), Re(x1), Im(x1), ...] for the chosen side.
std::vector<double> component_stream(const std::vector<ChannelObservation>& observations,
                                     Side side);

struct CensorResult {
    std::vector<std::pair<std::size_t, double>> kept; // (original index, value), in order
    std::vector<std::size_t> censored_indices;
};

// Drops every sample with |value| <= gamma.  kept and censored indices
// partition {0..len-1}.  Negative gamma raises config_error.
CensorResult censor(const std::vector<double>& samples, double gamma);

// Censor (when the scheme asks for it), then quantize the kept samples in order.
KeyMaterial alice_key(const std::vector<double>& samples, QuantizeScheme scheme,
                      double gamma = 0.0);

} // namespace keysim

#endif
