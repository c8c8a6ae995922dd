#ifndef KEYSIM_LDPC_HPP
#define KEYSIM_LDPC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "keysim/llr.hpp"
#include "keysim/rng.hpp"

namespace keysim {

// Sparse binary parity-check matrix with both row- and column-major adjacency
// for message passing.  Immutable after construction and safe to share across
// threads.
struct SparseParityMatrix {
    std::size_t n = 0; // variables (codeword length)
    std::size_t m = 0; // checks
    std::vector<std::vector<std::uint32_t>> rows; // per check: sorted variable ids
    std::vector<std::vector<std::uint32_t>> cols; // per variable: sorted check ids

    double rate() const {
        return static_cast<double>(n - m) / static_cast<double>(n);
    }
    std::size_t edge_count() const;

    // Builds the column adjacency from rows and checks the incidence set is
    // well formed (in-range, duplicate-free).  Throws input_error.
    static SparseParityMatrix from_rows(std::size_t n,
                                        std::vector<std::vector<std::uint32_t>> rows);

    // Verifies rows/cols describe the same duplicate-free incidence set.
    void validate() const;
};

// Random regular code: every column weight wc, every row weight wr,
// m = n*wc/wr checks.  Built by a random matching of variable and check
// sockets; duplicate edges are resampled away and 4-cycles are removed where
// possible.  Deterministic given the rng state.
SparseParityMatrix gallager_construct(std::size_t n, unsigned wc, unsigned wr,
                                      RngStream& rng);

// H * bits over GF(2); one parity per check.
std::vector<std::uint8_t> syndrome(const SparseParityMatrix& H,
                                   std::span<const std::uint8_t> bits);

struct DecodeResult {
    std::vector<std::uint8_t> bits; // hard decisions, tie at 0 maps to bit 1
    bool converged = false;         // syndrome of bits is all-zero
    unsigned iterations = 0;
    LlrVector posterior_llrs;
};

// Log-domain sum-product decoding with a flooding schedule and exact tanh-rule
// check updates; messages are clipped at +-50.  Terminates as soon as the hard
// decision satisfies every check (iteration 0 counts the initial channel
// decision).  Inputs must be finite: saturate first.
DecodeResult bp_decode(const SparseParityMatrix& H, const LlrVector& channel_llrs,
                       unsigned max_iters);

// Systematic encoder derived from H by GF(2) elimination.  The pivot columns
// become the parity positions and the remaining k = n - m columns carry the
// info bits verbatim; both position lists are in ascending column order, and
// the parity vector is emitted in parity_positions() order.
class SystematicEncoder {
public:
    SystematicEncoder() = default; // empty; prepare() is the factory

    // Throws config_error (reporting the rank) when H is rank deficient.
    static SystematicEncoder prepare(const SparseParityMatrix& H);

    std::size_t codeword_length() const { return n_; }
    std::size_t info_length() const { return info_cols_.size(); }
    std::size_t parity_length() const { return parity_cols_.size(); }
    const std::vector<std::uint32_t>& info_positions() const { return info_cols_; }
    const std::vector<std::uint32_t>& parity_positions() const { return parity_cols_; }

    struct Encoded {
        std::vector<std::uint8_t> codeword;
        std::vector<std::uint8_t> parity;
    };

    // H * codeword = 0 for every info vector of length k.
    Encoded encode(std::span<const std::uint8_t> info) const;

private:
    std::size_t n_ = 0;
    std::vector<std::uint32_t> info_cols_;
    std::vector<std::uint32_t> parity_cols_;
    std::size_t parity_words_ = 0;
    // Column-major parity masks: parity_words_ words per info position.
    std::vector<std::uint64_t> gen_;
};

} // namespace keysim

#endif
