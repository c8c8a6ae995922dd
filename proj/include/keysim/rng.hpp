#ifndef KEYSIM_RNG_HPP
#define KEYSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace keysim {

// SplitMix64 finalizer, used to turn (master seed, stream ids) into well-mixed
// engine seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream addressed by (master_seed, id0, id1, id2).
// Distinct ids give statistically independent streams; equal ids always replay
// the same sequence, which keeps parallel Monte-Carlo runs bit-reproducible no
// matter how work is scheduled.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t id0 = 0,
                       std::uint64_t id1 = 0, std::uint64_t id2 = 0)
        : engine_(mix64(mix64(mix64(mix64(master_seed) ^ id0) ^ id1) ^ id2)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1); never returns 0, so log() on the result is safe.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace keysim

#endif
