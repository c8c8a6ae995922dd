#include "keysim/reconcile.hpp"

#include <cmath>
#include <string>

#include "keysim/errors.hpp"

namespace keysim {

void ReconcileConfig::validate() const {
    if (!outer || !outer_encoder || !inner || !inner_encoder)
        throw config_error("reconcile: code matrices and encoders must be set");
    if (outer_encoder->info_length() != outer->n - outer->m)
        throw config_error("reconcile: outer encoder does not match the outer code");
    if (outer_encoder->parity_length() > inner_encoder->info_length())
        throw config_error("reconcile: outer parity length " +
                           std::to_string(outer_encoder->parity_length()) +
                           " exceeds inner info length " +
                           std::to_string(inner_encoder->info_length()));
    if (!(energy > 0.0))
        throw config_error("reconcile: energy must be positive");
    if (!(saturation > 0.0))
        throw config_error("reconcile: saturation must be positive");
    if (!(transport_sigma2 >= 0.0))
        throw config_error("reconcile: transport_sigma2 must be non-negative");
    if (!(gamma_fraction >= 0.0))
        throw config_error("reconcile: gamma_fraction must be non-negative");
    if (max_iters < 1)
        throw config_error("reconcile: max_iters must be at least 1");
}

std::vector<std::uint8_t> make_side_info(std::span<const std::uint8_t> k_A,
                                         const SystematicEncoder& outer) {
    return outer.encode(k_A).parity;
}

TransportResult transport_side_info(std::span<const std::uint8_t> parity,
                                    const ReconcileConfig& cfg, double sigma2_transport,
                                    RngStream& rng) {
    const SystematicEncoder& enc = *cfg.inner_encoder;
    if (parity.size() > enc.info_length())
        throw input_error("transport_side_info: parity longer than inner info length");

    std::vector<std::uint8_t> padded(enc.info_length(), 0);
    std::copy(parity.begin(), parity.end(), padded.begin());
    const auto encoded = enc.encode(padded);

    // Bit 0 -> +sqrt(E), bit 1 -> -sqrt(E).
    const double amp = std::sqrt(cfg.energy);
    std::vector<double> symbols(encoded.codeword.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        symbols[i] = encoded.codeword[i] ? -amp : amp;

    const auto received = bpsk_awgn(symbols, cfg.energy, sigma2_transport, rng);

    // The transport link always demodulates with the exponent-free form; with
    // sigma2 -> 0 treat the channel as noiseless rather than dividing by zero.
    LlrVector demod;
    demod.values.resize(received.size());
    if (sigma2_transport == 0.0) {
        for (std::size_t i = 0; i < received.size(); ++i)
            demod.values[i] = received[i] > 0.0 ? cfg.saturation : -cfg.saturation;
    } else {
        for (std::size_t i = 0; i < received.size(); ++i)
            demod.values[i] = llr_bpsk_approx(received[i], cfg.energy, sigma2_transport);
    }
    saturate_in_place(demod.values, cfg.saturation);
    demod.saturation = cfg.saturation;

    const DecodeResult decoded = bp_decode(*cfg.inner, demod, cfg.max_iters);

    TransportResult out;
    out.converged = decoded.converged;
    out.parity_llrs.values.resize(parity.size());
    const auto& info_pos = enc.info_positions();
    for (std::size_t i = 0; i < parity.size(); ++i)
        out.parity_llrs.values[i] = decoded.posterior_llrs.values[info_pos[i]];
    saturate_in_place(out.parity_llrs.values, cfg.saturation);
    out.parity_llrs.saturation = cfg.saturation;
    return out;
}

ReconcileOutput reconcile_key(const LlrVector& channel_llrs, const LlrVector& parity_llrs,
                              const SparseParityMatrix& outer, const SystematicEncoder& enc,
                              unsigned max_iters) {
    if (channel_llrs.values.size() != enc.info_length())
        throw input_error("reconcile_key: channel LLR count does not match key length");
    if (parity_llrs.values.size() != enc.parity_length())
        throw input_error("reconcile_key: parity LLR count does not match parity length");

    LlrVector full;
    full.values.resize(outer.n);
    const auto& info_pos = enc.info_positions();
    const auto& parity_pos = enc.parity_positions();
    for (std::size_t i = 0; i < info_pos.size(); ++i)
        full.values[info_pos[i]] = channel_llrs.values[i];
    for (std::size_t i = 0; i < parity_pos.size(); ++i)
        full.values[parity_pos[i]] = parity_llrs.values[i];
    full.saturation = std::max(channel_llrs.saturation, parity_llrs.saturation);

    const DecodeResult decoded = bp_decode(outer, full, max_iters);

    ReconcileOutput out;
    out.converged = decoded.converged;
    out.k_B.resize(info_pos.size());
    for (std::size_t i = 0; i < info_pos.size(); ++i)
        out.k_B[i] = decoded.bits[info_pos[i]];
    return out;
}

double channel_measurement_llr(double f, double sigma2_w, const ReconcileConfig& cfg) {
    switch (cfg.llr_method) {
    case LlrMethod::proposed: {
        const double v = cfg.wprime == WPrimeVariance::statistical ? 2.0 * sigma2_w : sigma2_w;
        return llr_channel_proposed(f, v);
    }
    case LlrMethod::bpsk_approx:
        return llr_bpsk_approx(f, cfg.energy, sigma2_w);
    case LlrMethod::bpsk_exact:
        return llr_bpsk_exact(f, cfg.energy, sigma2_w);
    }
    throw config_error("unknown LLR method");
}

namespace {

std::size_t hamming_distance(const std::vector<std::uint8_t>& a,
                             const std::vector<std::uint8_t>& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i];
    return d;
}

} // namespace

TrialResult run_trial(const ChannelConfig& channel_cfg, const ReconcileConfig& rcfg,
                      RngStream& rng, TrialTap* tap) {
    channel_cfg.validate();
    rcfg.validate();

    const std::size_t k = rcfg.outer_encoder->info_length();
    const bool censoring = rcfg.scheme == QuantizeScheme::censoring;
    // gamma is a fraction of the complex gain power E[|h|^2] = 2*sigma2_h.
    const double gamma = censoring ? rcfg.gamma_fraction * 2.0 * channel_cfg.sigma2_h : 0.0;

    // Enough observations for k kept components.  With censoring, oversample
    // by 25% over the analytic expectation and top up in the rare shortfall.
    const double sample_sigma = std::sqrt(channel_cfg.sigma2_h + channel_cfg.sigma2_w);
    double p_cens = 0.0;
    if (censoring)
        p_cens = 1.0 - 2.0 * q_function(gamma / sample_sigma);
    std::size_t n_obs = censoring
        ? static_cast<std::size_t>(std::ceil(1.25 * (k / 2.0) / (1.0 - p_cens)))
        : (k + 1) / 2;
    n_obs = std::max<std::size_t>(n_obs, 1);

    std::vector<ChannelObservation> obs = sample_block(channel_cfg, n_obs, rng);
    std::vector<double> alice_stream = component_stream(obs, Side::alice);
    CensorResult cr = censor(alice_stream, gamma);
    while (cr.kept.size() < k) {
        const std::size_t missing = k - cr.kept.size();
        const std::size_t extra = std::max<std::size_t>(
            static_cast<std::size_t>(std::ceil(1.25 * (missing / 2.0) / (1.0 - p_cens))), 4);
        const auto more = sample_block(channel_cfg, extra, rng);
        obs.insert(obs.end(), more.begin(), more.end());
        alice_stream = component_stream(obs, Side::alice);
        cr = censor(alice_stream, gamma);
    }

    // Consume components up to the k-th kept one; later samples are unused.
    const std::size_t consumed = cr.kept[k - 1].first + 1;
    std::vector<std::size_t> kept_indices(k);
    TrialResult result;
    result.k_A.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
        kept_indices[t] = cr.kept[t].first;
        result.k_A[t] = quantize_bit(cr.kept[t].second);
    }
    std::size_t censored_count = 0;
    for (std::size_t idx : cr.censored_indices)
        censored_count += idx < consumed;
    result.censored_count = censored_count;

    // Bob and Eve pick out the same component indices; the censored index
    // list reaches them over an error-free control channel.
    const std::vector<double> bob_stream = component_stream(obs, Side::bob);
    const std::vector<double> eve_stream = component_stream(obs, Side::eve_alice);

    const double sigma2_w = channel_cfg.sigma2_w;
    LlrVector bob_llrs, eve_llrs;
    bob_llrs.values.resize(k);
    eve_llrs.values.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
        bob_llrs.values[t] = channel_measurement_llr(bob_stream[kept_indices[t]], sigma2_w, rcfg);
        eve_llrs.values[t] = channel_measurement_llr(eve_stream[kept_indices[t]], sigma2_w, rcfg);
    }
    saturate_in_place(bob_llrs.values, rcfg.saturation);
    saturate_in_place(eve_llrs.values, rcfg.saturation);
    bob_llrs.saturation = eve_llrs.saturation = rcfg.saturation;

    const std::vector<std::uint8_t> side_info = make_side_info(result.k_A, *rcfg.outer_encoder);
    TransportResult transport =
        transport_side_info(side_info, rcfg, rcfg.transport_sigma2, rng);
    result.inner_converged = transport.converged;

    LlrVector parity_llrs = transport.parity_llrs;
    if (rcfg.fusion == ParityFusion::hard_saturated) {
        for (double& v : parity_llrs.values)
            v = v > 0.0 ? rcfg.saturation : -rcfg.saturation;
    }

    const ReconcileOutput bob =
        reconcile_key(bob_llrs, parity_llrs, *rcfg.outer, *rcfg.outer_encoder, rcfg.max_iters);
    result.k_B = bob.k_B;
    result.outer_converged = bob.converged;

    // Eve mounts the same attack with her own measurements and the exact
    // parity LLRs Bob obtained.
    const ReconcileOutput eve =
        reconcile_key(eve_llrs, parity_llrs, *rcfg.outer, *rcfg.outer_encoder, rcfg.max_iters);
    result.k_E = eve.k_B;

    result.disagreements_ab = hamming_distance(result.k_A, result.k_B);
    result.disagreements_ae = hamming_distance(result.k_A, result.k_E);

    if (tap) {
        tap->kept_indices = kept_indices;
        tap->censored_indices.assign(cr.censored_indices.begin(), cr.censored_indices.end());
        tap->censored_indices.resize(censored_count);
        tap->side_info = side_info;
        tap->parity_llrs = parity_llrs;
        tap->bob_components.resize(k);
        tap->eve_components.resize(k);
        for (std::size_t t = 0; t < k; ++t) {
            tap->bob_components[t] = bob_stream[kept_indices[t]];
            tap->eve_components[t] = eve_stream[kept_indices[t]];
        }
        tap->sigma2_w = sigma2_w;
    }
    return result;
}

} // namespace keysim
