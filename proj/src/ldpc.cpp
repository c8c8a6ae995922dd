#include "keysim/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "keysim/errors.hpp"

namespace keysim {

namespace {
constexpr double kMessageClip = 50.0;

double clip_message(double x) {
    return std::clamp(x, -kMessageClip, kMessageClip);
}
} // namespace

std::size_t SparseParityMatrix::edge_count() const {
    std::size_t e = 0;
    for (const auto& row : rows)
        e += row.size();
    return e;
}

SparseParityMatrix SparseParityMatrix::from_rows(std::size_t n,
                                                 std::vector<std::vector<std::uint32_t>> rows) {
    SparseParityMatrix H;
    H.n = n;
    H.m = rows.size();
    H.rows = std::move(rows);
    H.cols.assign(n, {});
    for (std::size_t c = 0; c < H.m; ++c) {
        auto& row = H.rows[c];
        std::sort(row.begin(), row.end());
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] >= n)
                throw input_error("parity matrix: variable index " + std::to_string(row[i]) +
                                  " out of range in check " + std::to_string(c));
            if (i > 0 && row[i] == row[i - 1])
                throw input_error("parity matrix: duplicate entry in check " + std::to_string(c));
            H.cols[row[i]].push_back(static_cast<std::uint32_t>(c));
        }
    }
    return H;
}

void SparseParityMatrix::validate() const {
    if (rows.size() != m || cols.size() != n)
        throw input_error("parity matrix: adjacency sizes disagree with n/m");
    std::size_t row_edges = 0, col_edges = 0;
    for (std::size_t c = 0; c < m; ++c) {
        const auto& row = rows[c];
        row_edges += row.size();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] >= n)
                throw input_error("parity matrix: column index out of range");
            if (i > 0 && row[i] <= row[i - 1])
                throw input_error("parity matrix: row not sorted/duplicate-free");
            const auto& col = cols[row[i]];
            if (!std::binary_search(col.begin(), col.end(), static_cast<std::uint32_t>(c)))
                throw input_error("parity matrix: rows/cols incidence mismatch");
        }
    }
    for (const auto& col : cols)
        col_edges += col.size();
    if (row_edges != col_edges)
        throw input_error("parity matrix: rows/cols edge counts differ");
}

SparseParityMatrix gallager_construct(std::size_t n, unsigned wc, unsigned wr,
                                      RngStream& rng) {
    if (wc < 2)
        throw config_error("gallager_construct: column weight must be at least 2");
    if (wr <= wc)
        throw config_error("gallager_construct: row weight must exceed column weight");
    if (n == 0 || (n * wc) % wr != 0)
        throw config_error("gallager_construct: n*wc must be divisible by wr");
    const std::size_t m = n * wc / wr;
    const std::size_t edges = n * wc;
    if (wr > n)
        throw config_error("gallager_construct: row weight exceeds block length");

    // Random matching of variable sockets to check sockets.  Edge slot e
    // belongs to check e / wr; the shuffled socket list says which variable
    // sits there.
    std::vector<std::uint32_t> socket(edges);
    for (std::size_t e = 0; e < edges; ++e)
        socket[e] = static_cast<std::uint32_t>(e / wc);
    for (std::size_t i = edges - 1; i > 0; --i) {
        const std::size_t j = rng.next_u64() % (i + 1);
        std::swap(socket[i], socket[j]);
    }

    auto check_of = [wr](std::size_t e) { return e / wr; };

    // Resample duplicate edges (same variable twice in one check) and, where
    // possible, edges that close 4-cycles.
    std::vector<std::size_t> offending;
    for (int pass = 0; pass < 60; ++pass) {
        offending.clear();

        // Duplicates within a check.
        std::vector<std::uint32_t> scratch(wr);
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t base = c * wr;
            for (unsigned i = 0; i < wr; ++i)
                scratch[i] = socket[base + i];
            std::sort(scratch.begin(), scratch.end());
            for (unsigned i = 1; i < wr; ++i) {
                if (scratch[i] == scratch[i - 1]) {
                    for (unsigned s = 0; s < wr; ++s) {
                        if (socket[base + s] == scratch[i]) {
                            offending.push_back(base + s);
                            break;
                        }
                    }
                }
            }
        }
        const bool has_duplicates = !offending.empty();

        // Pairs of checks sharing two variables (4-cycles); only hunted once
        // the matching is duplicate-free, and only for a limited number of
        // passes since removal is best effort.
        if (!has_duplicates && pass < 40) {
            std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> var_slots(n);
            for (std::size_t e = 0; e < edges; ++e)
                var_slots[socket[e]].push_back(
                    {static_cast<std::uint32_t>(check_of(e)), static_cast<std::uint32_t>(e)});
            std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_seen;
            for (std::size_t v = 0; v < n; ++v) {
                const auto& slots = var_slots[v];
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    for (std::size_t j = i + 1; j < slots.size(); ++j) {
                        const std::uint32_t lo = std::min(slots[i].first, slots[j].first);
                        const std::uint32_t hi = std::max(slots[i].first, slots[j].first);
                        auto [it, inserted] = pair_seen.try_emplace({lo, hi}, slots[j].second);
                        if (!inserted)
                            offending.push_back(slots[j].second);
                    }
                }
            }
        }

        if (offending.empty())
            break;
        for (std::size_t e : offending) {
            const std::size_t j = rng.next_u64() % edges;
            std::swap(socket[e], socket[j]);
        }
        if (pass == 59 && has_duplicates)
            throw config_error("gallager_construct: could not resample duplicate edges");
    }

    std::vector<std::vector<std::uint32_t>> rows(m);
    for (std::size_t c = 0; c < m; ++c) {
        rows[c].assign(socket.begin() + c * wr, socket.begin() + (c + 1) * wr);
        std::sort(rows[c].begin(), rows[c].end());
        for (unsigned i = 1; i < wr; ++i)
            if (rows[c][i] == rows[c][i - 1])
                throw config_error("gallager_construct: could not resample duplicate edges");
    }
    return SparseParityMatrix::from_rows(n, std::move(rows));
}

std::vector<std::uint8_t> syndrome(const SparseParityMatrix& H,
                                   std::span<const std::uint8_t> bits) {
    if (bits.size() != H.n)
        throw input_error("syndrome: bit vector length " + std::to_string(bits.size()) +
                          " does not match n = " + std::to_string(H.n));
    std::vector<std::uint8_t> s(H.m, 0);
    for (std::size_t c = 0; c < H.m; ++c) {
        std::uint8_t parity = 0;
        for (std::uint32_t v : H.rows[c])
            parity ^= (bits[v] & 1u);
        s[c] = parity;
    }
    return s;
}

namespace {

// Flat message-passing graph in check-major edge order.
struct DecodeGraph {
    std::size_t n, m, edges;
    std::vector<std::uint32_t> check_off; // m+1
    std::vector<std::uint32_t> edge_var;  // edges
    std::vector<std::uint32_t> var_off;   // n+1
    std::vector<std::uint32_t> var_edges; // edges, grouped by variable

    explicit DecodeGraph(const SparseParityMatrix& H)
        : n(H.n), m(H.m), edges(H.edge_count()) {
        check_off.resize(m + 1);
        edge_var.resize(edges);
        std::size_t e = 0;
        for (std::size_t c = 0; c < m; ++c) {
            check_off[c] = static_cast<std::uint32_t>(e);
            for (std::uint32_t v : H.rows[c])
                edge_var[e++] = v;
        }
        check_off[m] = static_cast<std::uint32_t>(e);

        var_off.assign(n + 1, 0);
        for (std::size_t i = 0; i < edges; ++i)
            ++var_off[edge_var[i] + 1];
        for (std::size_t v = 0; v < n; ++v)
            var_off[v + 1] += var_off[v];
        var_edges.resize(edges);
        std::vector<std::uint32_t> cursor(var_off.begin(), var_off.end() - 1);
        for (std::size_t i = 0; i < edges; ++i)
            var_edges[cursor[edge_var[i]]++] = static_cast<std::uint32_t>(i);
    }
};

std::uint8_t hard_bit(double llr) {
    return llr > 0.0 ? 0 : 1; // tie at 0 maps to bit 1
}

bool checks_satisfied(const DecodeGraph& g, const std::vector<std::uint8_t>& bits) {
    for (std::size_t c = 0; c < g.m; ++c) {
        std::uint8_t parity = 0;
        for (std::uint32_t e = g.check_off[c]; e < g.check_off[c + 1]; ++e)
            parity ^= bits[g.edge_var[e]];
        if (parity)
            return false;
    }
    return true;
}

} // namespace

DecodeResult bp_decode(const SparseParityMatrix& H, const LlrVector& channel_llrs,
                       unsigned max_iters) {
    if (channel_llrs.values.size() != H.n)
        throw input_error("bp_decode: LLR length does not match codeword length");
    if (max_iters < 1)
        throw input_error("bp_decode: max_iters must be at least 1");
    for (double v : channel_llrs.values)
        if (!std::isfinite(v))
            throw input_error("bp_decode: non-finite channel LLR; saturate first");

    const DecodeGraph g(H);
    const std::vector<double>& chan = channel_llrs.values;

    DecodeResult result;
    result.bits.resize(g.n);
    for (std::size_t v = 0; v < g.n; ++v)
        result.bits[v] = hard_bit(chan[v]);
    if (checks_satisfied(g, result.bits)) {
        result.converged = true;
        result.iterations = 0;
        result.posterior_llrs = channel_llrs;
        return result;
    }

    std::vector<double> v2c(g.edges), c2v(g.edges, 0.0);
    for (std::size_t e = 0; e < g.edges; ++e)
        v2c[e] = clip_message(chan[g.edge_var[e]]);

    std::size_t max_row = 0;
    for (std::size_t c = 0; c < g.m; ++c)
        max_row = std::max<std::size_t>(max_row, g.check_off[c + 1] - g.check_off[c]);
    std::vector<double> tanh_buf(max_row), suffix(max_row + 1);
    const double tanh_cap = std::nextafter(1.0, 0.0);

    std::vector<double> posterior(g.n);
    for (unsigned it = 1; it <= max_iters; ++it) {
        // Check pass: tanh-rule extrinsic products via prefix/suffix sweeps.
        for (std::size_t c = 0; c < g.m; ++c) {
            const std::uint32_t begin = g.check_off[c];
            const std::uint32_t deg = g.check_off[c + 1] - begin;
            for (std::uint32_t i = 0; i < deg; ++i)
                tanh_buf[i] = std::tanh(0.5 * v2c[begin + i]);
            suffix[deg] = 1.0;
            for (std::uint32_t i = deg; i-- > 0;)
                suffix[i] = suffix[i + 1] * tanh_buf[i];
            double prefix = 1.0;
            for (std::uint32_t i = 0; i < deg; ++i) {
                const double prod = std::clamp(prefix * suffix[i + 1], -tanh_cap, tanh_cap);
                c2v[begin + i] = clip_message(2.0 * std::atanh(prod));
                prefix *= tanh_buf[i];
            }
        }

        // Variable pass.
        for (std::size_t v = 0; v < g.n; ++v) {
            double total = chan[v];
            for (std::uint32_t s = g.var_off[v]; s < g.var_off[v + 1]; ++s)
                total += c2v[g.var_edges[s]];
            posterior[v] = total;
            for (std::uint32_t s = g.var_off[v]; s < g.var_off[v + 1]; ++s) {
                const std::uint32_t e = g.var_edges[s];
                v2c[e] = clip_message(total - c2v[e]);
            }
            result.bits[v] = hard_bit(total);
        }

        if (checks_satisfied(g, result.bits)) {
            result.converged = true;
            result.iterations = it;
            result.posterior_llrs.values = posterior;
            return result;
        }
        result.iterations = it;
    }

    result.converged = false;
    result.posterior_llrs.values = posterior;
    return result;
}

SystematicEncoder SystematicEncoder::prepare(const SparseParityMatrix& H) {
    const std::size_t n = H.n, m = H.m;
    if (m == 0 || n <= m)
        throw config_error("encoder: need 0 < m < n");
    const std::size_t words = (n + 63) / 64;

    std::vector<std::uint64_t> dense(m * words, 0);
    for (std::size_t c = 0; c < m; ++c)
        for (std::uint32_t v : H.rows[c])
            dense[c * words + v / 64] |= 1ULL << (v % 64);

    auto test_bit = [&](std::size_t row, std::size_t col) {
        return (dense[row * words + col / 64] >> (col % 64)) & 1ULL;
    };
    auto xor_rows = [&](std::size_t dst, std::size_t src) {
        std::uint64_t* d = &dense[dst * words];
        const std::uint64_t* s = &dense[src * words];
        for (std::size_t w = 0; w < words; ++w)
            d[w] ^= s[w];
    };

    std::vector<std::uint32_t> pivots;
    pivots.reserve(m);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t pivot_row = m;
        for (std::size_t r = rank; r < m; ++r) {
            if (test_bit(r, col)) {
                pivot_row = r;
                break;
            }
        }
        if (pivot_row == m)
            continue;
        if (pivot_row != rank)
            for (std::size_t w = 0; w < words; ++w)
                std::swap(dense[rank * words + w], dense[pivot_row * words + w]);
        for (std::size_t r = rank + 1; r < m; ++r)
            if (test_bit(r, col))
                xor_rows(r, rank);
        pivots.push_back(static_cast<std::uint32_t>(col));
        ++rank;
    }
    if (rank < m)
        throw config_error("encoder: parity-check matrix is rank deficient (rank " +
                           std::to_string(rank) + " of " + std::to_string(m) + " checks)");

    for (std::size_t i = m; i-- > 1;) {
        const std::uint32_t col = pivots[i];
        for (std::size_t r = 0; r < i; ++r)
            if (test_bit(r, col))
                xor_rows(r, i);
    }

    SystematicEncoder enc;
    enc.n_ = n;
    enc.parity_cols_ = pivots; // ascending by construction
    enc.info_cols_.reserve(n - m);
    {
        std::size_t p = 0;
        for (std::uint32_t col = 0; col < n; ++col) {
            if (p < pivots.size() && pivots[p] == col)
                ++p;
            else
                enc.info_cols_.push_back(col);
        }
    }

    enc.parity_words_ = (m + 63) / 64;
    enc.gen_.assign(enc.info_cols_.size() * enc.parity_words_, 0);
    for (std::size_t t = 0; t < enc.info_cols_.size(); ++t) {
        const std::uint32_t col = enc.info_cols_[t];
        std::uint64_t* mask = &enc.gen_[t * enc.parity_words_];
        for (std::size_t i = 0; i < m; ++i)
            if (test_bit(i, col))
                mask[i / 64] |= 1ULL << (i % 64);
    }
    return enc;
}

SystematicEncoder::Encoded SystematicEncoder::encode(std::span<const std::uint8_t> info) const {
    const std::size_t k = info_cols_.size();
    const std::size_t m = parity_cols_.size();
    if (info.size() != k)
        throw input_error("encode: info length " + std::to_string(info.size()) +
                          " does not match k = " + std::to_string(k));

    std::vector<std::uint64_t> acc(parity_words_, 0);
    for (std::size_t t = 0; t < k; ++t) {
        if (info[t] & 1u) {
            const std::uint64_t* mask = &gen_[t * parity_words_];
            for (std::size_t w = 0; w < parity_words_; ++w)
                acc[w] ^= mask[w];
        }
    }

    Encoded out;
    out.codeword.assign(n_, 0);
    out.parity.resize(m);
    for (std::size_t t = 0; t < k; ++t)
        out.codeword[info_cols_[t]] = info[t] & 1u;
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint8_t bit = (acc[i / 64] >> (i % 64)) & 1ULL;
        out.parity[i] = bit;
        out.codeword[parity_cols_[i]] = bit;
    }
    return out;
}

} // namespace keysim
