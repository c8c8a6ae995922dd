#ifndef KEYSIM_LLR_HPP
#define KEYSIM_LLR_HPP

#include <limits>
#include <vector>

namespace keysim {

// Sign convention everywhere in this library: positive LLR means bit 0,
// negative LLR means bit 1, magnitude is confidence.
struct LlrVector {
    std::vector<double> values;
    // Maximum absolute value that has been applied; infinity means unbounded.
    double saturation = std::numeric_limits<double>::infinity();
};

// ln of the Gaussian likelihood ratio for a BPSK observation, computed
// literally as exp() of both exponents followed by log().  Once an exponent
// passes the double underflow threshold (about -745) the result degenerates
// to +-inf.  That failure mode is intentional and observable here; use
// llr_bpsk_approx for a form that never leaves the reals.
double llr_bpsk_exact(double b, double energy, double sigma2);

// 2 * b * sqrt(energy) / sigma2 -- algebraically identical to the exact form
// but free of exponentials.
double llr_bpsk_approx(double b, double energy, double sigma2);

// Gaussian tail probability P(Z > x); relative error <= 1e-12 for |x| <= 8.
double q_function(double x);

// log(Q(x)) evaluated without underflow for any representable x.
double log_q(double x);

// ln[ Q(-f/sqrt(v)) / (1 - Q(-f/sqrt(v))) ] with v = sigma2_prime, the
// variance of the measurement-difference noise.  Evaluated as a difference of
// log tail probabilities so the value stays finite for every representable f.
double llr_channel_proposed(double f, double sigma2_prime);

// Clamp to [-max_abs, +max_abs]; +-inf map to the bounds, NaN maps to 0
// (total uncertainty).  max_abs must be positive.
LlrVector saturate(const LlrVector& llrs, double max_abs);
void saturate_in_place(std::vector<double>& values, double max_abs);

} // namespace keysim

#endif
