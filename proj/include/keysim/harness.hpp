#ifndef KEYSIM_HARNESS_HPP
#define KEYSIM_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keysim/reconcile.hpp"

namespace keysim {

// Realized regular-code parameters for a requested rate.  n is adjusted to
// the nearest multiple of the row weight so every column/row weight is exact;
// the realized rate is reported alongside.
struct CodePlan {
    double requested_rate = 0.0;
    unsigned wc = 3;
    unsigned wr = 6;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    double realized_rate = 0.0;
};

CodePlan plan_outer_code(std::size_t nominal_block_length, double rate, unsigned wc = 3);

// Length of the rate-1/2 transport code whose info part holds parity_bits
// (rounded up to a feasible regular length).
std::size_t plan_inner_length(std::size_t parity_bits);

struct SweepConfig {
    std::vector<double> snr_db_list;
    std::vector<QuantizeScheme> schemes{QuantizeScheme::one_bit};
    std::vector<LlrMethod> llr_methods{LlrMethod::proposed};
    std::vector<double> outer_rates{0.5};
    std::size_t block_length = 2048;
    std::size_t blocks_per_point = 200;
    std::uint64_t master_seed = 1;
    std::optional<double> transport_snr_db; // default: equal to the channel SNR
    double gamma_fraction = 0.1;
    double sigma2_h = 0.5; // per-component gain variance (unit complex power)
    double energy = 1.0;
    double saturation = 50.0;
    unsigned max_iters = 50;
    unsigned threads = 0; // 0 = hardware concurrency
    WPrimeVariance wprime = WPrimeVariance::statistical;
    ParityFusion fusion = ParityFusion::soft_posterior;

    void validate() const; // throws config_error
};

struct SweepRecord {
    double snr_db = 0.0;
    QuantizeScheme scheme = QuantizeScheme::one_bit;
    LlrMethod llr_method = LlrMethod::proposed;
    double outer_rate = 0.0;
    std::size_t key_length = 0;
    double censored_mean = 0.0;
    double bit_disagreement_prob = 0.0;
    double block_error_prob = 0.0;
    std::size_t blocks = 0;
    double eve_disagreement_prob = 0.0;
};

// Closed-form sign-disagreement probability of the two reciprocal estimates:
// arccos(rho)/pi with rho = s/(s+1), s = 10^(snr_db/10).
double analytic_raw_disagreement(double snr_db);

// P(|component| <= gamma_abs) for one measured component.
double censor_probability(double sigma2_h, double sigma2_w, double gamma_abs);

// Monte-Carlo estimate of the raw pre-reconciliation disagreement.
double measure_raw_disagreement(double snr_db, std::size_t n_components, std::uint64_t seed,
                                double sigma2_h = 0.5);

// Runs blocks_per_point trials for every (snr, rate, scheme, method) cell.
// Deterministic for a fixed master_seed regardless of the worker count.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

std::string csv_header();
std::string to_csv(const std::vector<SweepRecord>& records);
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path); // io_error
std::vector<SweepRecord> parse_csv(const std::string& text);                     // parse_error

const char* to_string(QuantizeScheme scheme);
const char* to_string(LlrMethod method);
QuantizeScheme parse_scheme(const std::string& name);   // throws config_error
LlrMethod parse_llr_method(const std::string& name);    // throws config_error

// BER baseline of the rate-1/2 transport code over BPSK/AWGN, measured
// against the hard-decision (sign) demodulator.
struct DecodeBenchRecord {
    double snr_db = 0.0;
    double raw_ber = 0.0;   // hard-decision errors over codeword bits
    double coded_ber = 0.0; // decoded info-bit errors
    std::size_t info_bits = 0;
    std::size_t blocks_failed = 0;
};

std::vector<DecodeBenchRecord> decode_bench(const std::vector<double>& snr_db_list,
                                            std::size_t block_length, std::size_t blocks,
                                            std::uint64_t seed, double energy = 1.0,
                                            double saturation = 50.0, unsigned max_iters = 50);

} // namespace keysim

#endif
