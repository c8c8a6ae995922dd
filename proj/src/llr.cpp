#include "keysim/llr.hpp"

#include <algorithm>
#include <cmath>

#include "keysim/errors.hpp"

namespace keysim {

double llr_bpsk_exact(double b, double energy, double sigma2) {
    if (!(energy > 0.0) || !(sigma2 > 0.0))
        throw input_error("llr_bpsk_exact: energy and sigma2 must be positive");
    const double amp = std::sqrt(energy);
    const double num = std::exp(-(b - amp) * (b - amp) / (2.0 * sigma2));
    const double den = std::exp(-(b + amp) * (b + amp) / (2.0 * sigma2));
    return std::log(num / den);
}

double llr_bpsk_approx(double b, double energy, double sigma2) {
    if (!(energy > 0.0) || !(sigma2 > 0.0))
        throw input_error("llr_bpsk_approx: energy and sigma2 must be positive");
    return 2.0 * b * std::sqrt(energy) / sigma2;
}

double q_function(double x) {
    if (std::isnan(x))
        throw input_error("q_function: non-finite argument");
    return 0.5 * std::erfc(x * 0.70710678118654752440);
}

double log_q(double x) {
    // erfc keeps full relative accuracy until it underflows near
    // erfc(26.5) ~ 1e-308 (x ~ 37); switch to the asymptotic tail expansion
    //   Q(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6)
    // before that, where its truncation error is below 2e-13.
    if (x < 30.0)
        return std::log(q_function(x));
    const double inv2 = 1.0 / (x * x);
    const double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 - 15.0 * inv2));
    return -0.5 * x * x - std::log(x) - 0.91893853320467274178 + std::log(series);
}

double llr_channel_proposed(double f, double sigma2_prime) {
    if (!(sigma2_prime > 0.0))
        throw input_error("llr_channel_proposed: sigma2_prime must be positive");
    if (!std::isfinite(f))
        throw input_error("llr_channel_proposed: non-finite sample");
    // Q(-t) is the numerator tail and Q(t) the denominator tail, t = f/sqrt(v).
    // |t| is capped so t^2 cannot overflow; the result stays finite for every
    // representable f.
    double t = f / std::sqrt(sigma2_prime);
    t = std::clamp(t, -1e150, 1e150);
    return log_q(-t) - log_q(t);
}

void saturate_in_place(std::vector<double>& values, double max_abs) {
    if (!(max_abs > 0.0))
        throw config_error("saturate: bound must be positive");
    for (double& v : values) {
        if (std::isnan(v))
            v = 0.0;
        else if (v > max_abs)
            v = max_abs;
        else if (v < -max_abs)
            v = -max_abs;
    }
}

LlrVector saturate(const LlrVector& llrs, double max_abs) {
    LlrVector out = llrs;
    saturate_in_place(out.values, max_abs);
    out.saturation = max_abs;
    return out;
}

} // namespace keysim
