#ifndef KEYSIM_CHANNEL_HPP
#define KEYSIM_CHANNEL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "keysim/rng.hpp"

namespace keysim {

// Per-component variances of the reciprocal channel model.  "Component
// variance v" means Re and Im are each independent N(0, v), so the complex
// gain power E[|h|^2] is 2 * sigma2_h.  SNR is defined as the per-component
// ratio sigma2_h / sigma2_w and is the x-axis of every sweep.
struct ChannelConfig {
    double sigma2_h = 0.5; // default gives unit complex gain power
    double sigma2_w = 0.05;

    double snr_db() const;
    static ChannelConfig from_snr_db(double snr_db, double sigma2_h = 0.5);

    // Throws config_error when a variance is non-positive.
    void validate() const;
};

// One coherence-time measurement set.  a and b share the same gain draw
// (reciprocity within the coherence time); Eve's estimates come from gains
// independent of it and of each other.
struct ChannelObservation {
    std::complex<double> a;       // Alice's estimate of the reciprocal channel
    std::complex<double> b;       // Bob's estimate of the same gain
    std::complex<double> e_alice; // Eve's estimate of her channel to Alice
    std::complex<double> e_bob;   // Eve's estimate of her channel to Bob
};

ChannelObservation sample_observation(const ChannelConfig& cfg, RngStream& rng);

// n_samples mutually independent observations (one per coherence time).
std::vector<ChannelObservation> sample_block(const ChannelConfig& cfg,
                                             std::size_t n_samples, RngStream& rng);

// BPSK symbols (each +-sqrt(energy)) through AWGN of variance sigma2.
// A symbol outside the constellation raises input_error.
std::vector<double> bpsk_awgn(const std::vector<double>& symbols, double energy,
                              double sigma2, RngStream& rng);

} // namespace keysim

#endif
