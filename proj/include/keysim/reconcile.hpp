#ifndef KEYSIM_RECONCILE_HPP
#define KEYSIM_RECONCILE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "keysim/channel.hpp"
#include "keysim/ldpc.hpp"
#include "keysim/llr.hpp"
#include "keysim/quantize.hpp"

namespace keysim {

enum class LlrMethod { proposed, bpsk_approx, bpsk_exact };

// Variance plugged into the proposed channel LLR for the difference noise
// w' = w_a - w_b.  The statistically correct value is 2*sigma2_w; the
// paper_literal switch uses sigma2_w itself for compatibility runs.
enum class WPrimeVariance { statistical, paper_literal };

// How the transported parity enters Slepian-Wolf decoding: the inner
// decoder's posterior LLRs (soft end-to-end) or hard decisions mapped to
// +-saturation.
enum class ParityFusion { soft_posterior, hard_saturated };

struct ReconcileConfig {
    const SparseParityMatrix* outer = nullptr;         // H_p, Slepian-Wolf code
    const SystematicEncoder* outer_encoder = nullptr;
    const SparseParityMatrix* inner = nullptr;         // H_t, transport code
    const SystematicEncoder* inner_encoder = nullptr;
    LlrMethod llr_method = LlrMethod::proposed;
    QuantizeScheme scheme = QuantizeScheme::one_bit;
    double gamma_fraction = 0.1;     // censoring threshold as a fraction of E[|h|^2]
    double energy = 1.0;             // BPSK symbol energy on the parity link
    double saturation = 50.0;        // decoder-input LLR bound
    double transport_sigma2 = 0.0;   // AWGN variance on the parity link
    WPrimeVariance wprime = WPrimeVariance::statistical;
    ParityFusion fusion = ParityFusion::soft_posterior;
    unsigned max_iters = 50;

    void validate() const; // throws config_error
};

struct TrialResult {
    std::vector<std::uint8_t> k_A;
    std::vector<std::uint8_t> k_B;
    std::vector<std::uint8_t> k_E;
    std::size_t disagreements_ab = 0;
    std::size_t disagreements_ae = 0;
    bool outer_converged = false;
    bool inner_converged = false;
    std::size_t censored_count = 0;
};

// Parity bits of Alice's key under the outer code.  Only the parity vector --
// never the key itself -- leaves this operation.
std::vector<std::uint8_t> make_side_info(std::span<const std::uint8_t> k_A,
                                         const SystematicEncoder& outer);

struct TransportResult {
    LlrVector parity_llrs; // one per parity bit, saturated to cfg.saturation
    bool converged = false;
};

// Parity bits zero-padded to the inner info length, systematically encoded,
// BPSK modulated, passed through AWGN, demodulated with the exponent-free
// BPSK LLR, and BP decoded; returns the posterior LLRs at the parity
// positions.  Non-convergence is reported in the result, not raised.
TransportResult transport_side_info(std::span<const std::uint8_t> parity,
                                    const ReconcileConfig& cfg, double sigma2_transport,
                                    RngStream& rng);

struct ReconcileOutput {
    std::vector<std::uint8_t> k_B;
    bool converged = false;
};

// Scatters channel LLRs over the key positions and parity LLRs over the
// parity positions of the outer code, BP decodes, and reads the key back off
// the info positions.
ReconcileOutput reconcile_key(const LlrVector& channel_llrs, const LlrVector& parity_llrs,
                              const SparseParityMatrix& outer, const SystematicEncoder& enc,
                              unsigned max_iters);

// Bob's channel-measurement LLR for one component under the configured method.
double channel_measurement_llr(double f, double sigma2_w, const ReconcileConfig& cfg);

// Everything that crosses the public boundary during a trial, plus the private
// inputs each party feeds its own decoder; captured for tests that verify the
// information flow.
struct TrialTap {
    std::vector<std::size_t> kept_indices;
    std::vector<std::size_t> censored_indices;
    std::vector<std::uint8_t> side_info;
    LlrVector parity_llrs;
    std::vector<double> bob_components; // Bob's measurements at the kept indices
    std::vector<double> eve_components; // Eve's measurements at the kept indices
    double sigma2_w = 0.0;
};

// One full key-agreement round: Alice quantizes (censoring if configured),
// side information crosses the BPSK link, Bob reconciles with his channel
// LLRs, and Eve repeats Bob's procedure with her own uncorrelated
// measurements and the same parity LLRs.
TrialResult run_trial(const ChannelConfig& channel_cfg, const ReconcileConfig& rcfg,
                      RngStream& rng, TrialTap* tap = nullptr);

} // namespace keysim

#endif
