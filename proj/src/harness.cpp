#include "keysim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "keysim/errors.hpp"

namespace keysim {

namespace {
// Stream-id tags keep code construction, trials, and measurement draws on
// disjoint rng streams.
constexpr std::uint64_t kOuterCodeTag = 0xC0DE0001ULL;
constexpr std::uint64_t kInnerCodeTag = 0xC0DE0002ULL;
constexpr std::uint64_t kTrialTag = 0x7121A1ULL;
constexpr std::uint64_t kMeasureTag = 0x0A515ULL;
} // namespace

CodePlan plan_outer_code(std::size_t nominal_block_length, double rate, unsigned wc) {
    if (!(rate > 0.0) || !(rate < 1.0))
        throw config_error("outer rate must lie in (0, 1), got " + std::to_string(rate));
    if (wc < 2)
        throw config_error("column weight must be at least 2");
    CodePlan plan;
    plan.requested_rate = rate;
    plan.wc = wc;
    plan.wr = static_cast<unsigned>(std::lround(wc / (1.0 - rate)));
    if (plan.wr <= wc)
        throw config_error("rate " + std::to_string(rate) + " needs a row weight above " +
                           std::to_string(wc));
    // Snap n to the nearest multiple of wr so the code is exactly regular.
    const double ratio = static_cast<double>(nominal_block_length) / plan.wr;
    std::size_t multiple = static_cast<std::size_t>(std::llround(ratio));
    multiple = std::max<std::size_t>(multiple, 2); // keep k and m both positive
    plan.n = multiple * plan.wr;
    plan.m = plan.n * wc / plan.wr;
    plan.k = plan.n - plan.m;
    plan.realized_rate = static_cast<double>(plan.k) / static_cast<double>(plan.n);
    return plan;
}

std::size_t plan_inner_length(std::size_t parity_bits) {
    // Rate-1/2 (3,6) code: info length n/2 must cover the parity bits.
    const std::size_t n = 2 * parity_bits;
    return ((n + 5) / 6) * 6;
}

void SweepConfig::validate() const {
    if (snr_db_list.empty())
        throw config_error("sweep: at least one SNR point required");
    if (schemes.empty())
        throw config_error("sweep: at least one scheme required");
    if (llr_methods.empty())
        throw config_error("sweep: at least one LLR method required");
    if (outer_rates.empty())
        throw config_error("sweep: at least one outer rate required");
    if (blocks_per_point < 1)
        throw config_error("sweep: blocks_per_point must be at least 1");
    if (!(gamma_fraction >= 0.0))
        throw config_error("sweep: gamma_fraction must be non-negative");
    if (!(sigma2_h > 0.0))
        throw config_error("sweep: sigma2_h must be positive");
    if (!(energy > 0.0))
        throw config_error("sweep: energy must be positive");
    if (!(saturation > 0.0))
        throw config_error("sweep: saturation must be positive");
    if (max_iters < 1)
        throw config_error("sweep: max_iters must be at least 1");
    for (double r : outer_rates)
        plan_outer_code(block_length, r); // throws on infeasible rates
}

double analytic_raw_disagreement(double snr_db) {
    if (std::isnan(snr_db))
        throw input_error("analytic_raw_disagreement: non-finite SNR");
    const double s = std::pow(10.0, snr_db / 10.0);
    const double rho = s / (s + 1.0);
    return std::acos(rho) / 3.14159265358979323846;
}

double censor_probability(double sigma2_h, double sigma2_w, double gamma_abs) {
    if (gamma_abs <= 0.0)
        return 0.0;
    const double sigma = std::sqrt(sigma2_h + sigma2_w);
    return 1.0 - 2.0 * q_function(gamma_abs / sigma);
}

double measure_raw_disagreement(double snr_db, std::size_t n_components, std::uint64_t seed,
                                double sigma2_h) {
    const ChannelConfig cfg = ChannelConfig::from_snr_db(snr_db, sigma2_h);
    RngStream rng(seed, kMeasureTag);
    std::size_t disagree = 0, seen = 0;
    // Sample in slabs to keep memory flat at large counts.
    while (seen < n_components) {
        const std::size_t want = std::min<std::size_t>((n_components - seen + 1) / 2, 1 << 16);
        const auto obs = sample_block(cfg, want, rng);
        const auto alice = component_stream(obs, Side::alice);
        const auto bob = component_stream(obs, Side::bob);
        for (std::size_t i = 0; i < alice.size() && seen < n_components; ++i, ++seen)
            disagree += quantize_bit(alice[i]) != quantize_bit(bob[i]);
    }
    return static_cast<double>(disagree) / static_cast<double>(n_components);
}

namespace {

struct RateCodes {
    CodePlan plan;
    SparseParityMatrix outer;
    SystematicEncoder outer_encoder;
    SparseParityMatrix inner;
    SystematicEncoder inner_encoder;
};

// Regular construction with a bounded number of reseeds when elimination
// finds the draw rank deficient.
SparseParityMatrix construct_full_rank(std::size_t n, unsigned wc, unsigned wr,
                                       std::uint64_t master_seed, std::uint64_t tag,
                                       std::uint64_t index, SystematicEncoder* encoder_out) {
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        RngStream rng(master_seed, tag, index, attempt);
        SparseParityMatrix H = gallager_construct(n, wc, wr, rng);
        try {
            SystematicEncoder enc = SystematicEncoder::prepare(H);
            if (encoder_out)
                *encoder_out = std::move(enc);
            return H;
        } catch (const config_error&) {
            // rank-deficient draw: reject and redraw
        }
    }
    throw config_error("could not draw a full-rank regular code for n = " + std::to_string(n));
}

RateCodes build_rate_codes(const SweepConfig& cfg, double rate, std::size_t rate_index) {
    RateCodes codes;
    codes.plan = plan_outer_code(cfg.block_length, rate);
    codes.outer = construct_full_rank(codes.plan.n, codes.plan.wc, codes.plan.wr,
                                      cfg.master_seed, kOuterCodeTag, rate_index,
                                      &codes.outer_encoder);
    const std::size_t inner_n = plan_inner_length(codes.plan.m);
    codes.inner = construct_full_rank(inner_n, 3, 6, cfg.master_seed, kInnerCodeTag, rate_index,
                                      &codes.inner_encoder);
    return codes;
}

struct Cell {
    double snr_db;
    std::size_t rate_index;
    QuantizeScheme scheme;
    LlrMethod method;
};

struct TaskOut {
    std::uint32_t disagreements_ab = 0;
    std::uint32_t disagreements_ae = 0;
    std::uint32_t censored = 0;
    std::uint8_t block_error = 0;
};

} // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();

    // Normalized axes give the deterministic (snr, rate, scheme, method)
    // record order no matter how the request was phrased.
    std::vector<double> snrs = cfg.snr_db_list;
    std::sort(snrs.begin(), snrs.end());
    snrs.erase(std::unique(snrs.begin(), snrs.end()), snrs.end());
    std::vector<double> rates = cfg.outer_rates;
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
    std::vector<QuantizeScheme> schemes = cfg.schemes;
    std::sort(schemes.begin(), schemes.end());
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
    std::vector<LlrMethod> methods = cfg.llr_methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    // All codes are built (and validated) before any trial runs.
    std::vector<RateCodes> codes;
    codes.reserve(rates.size());
    for (std::size_t r = 0; r < rates.size(); ++r)
        codes.push_back(build_rate_codes(cfg, rates[r], r));

    std::vector<Cell> cells;
    for (double snr : snrs)
        for (std::size_t r = 0; r < rates.size(); ++r)
            for (QuantizeScheme scheme : schemes)
                for (LlrMethod method : methods)
                    cells.push_back({snr, r, scheme, method});

    const std::size_t blocks = cfg.blocks_per_point;
    std::vector<TaskOut> results(cells.size() * blocks);

    auto run_task = [&](std::size_t task) {
        const std::size_t cell_id = task / blocks;
        const std::size_t block = task % blocks;
        const Cell& cell = cells[cell_id];
        const RateCodes& rc = codes[cell.rate_index];

        const ChannelConfig ccfg = ChannelConfig::from_snr_db(cell.snr_db, cfg.sigma2_h);
        ReconcileConfig rcfg;
        rcfg.outer = &rc.outer;
        rcfg.outer_encoder = &rc.outer_encoder;
        rcfg.inner = &rc.inner;
        rcfg.inner_encoder = &rc.inner_encoder;
        rcfg.llr_method = cell.method;
        rcfg.scheme = cell.scheme;
        rcfg.gamma_fraction = cfg.gamma_fraction;
        rcfg.energy = cfg.energy;
        rcfg.saturation = cfg.saturation;
        const double transport_snr = cfg.transport_snr_db.value_or(cell.snr_db);
        rcfg.transport_sigma2 = cfg.energy / std::pow(10.0, transport_snr / 10.0);
        rcfg.wprime = cfg.wprime;
        rcfg.fusion = cfg.fusion;
        rcfg.max_iters = cfg.max_iters;

        RngStream rng(cfg.master_seed, kTrialTag, cell_id, block);
        const TrialResult tr = run_trial(ccfg, rcfg, rng);

        TaskOut& out = results[task];
        out.disagreements_ab = static_cast<std::uint32_t>(tr.disagreements_ab);
        out.disagreements_ae = static_cast<std::uint32_t>(tr.disagreements_ae);
        out.censored = static_cast<std::uint32_t>(tr.censored_count);
        out.block_error = tr.disagreements_ab > 0 ? 1 : 0;
    };

    const std::size_t total_tasks = cells.size() * blocks;
    unsigned workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, total_tasks));

    if (workers == 1) {
        for (std::size_t t = 0; t < total_tasks; ++t)
            run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= total_tasks)
                        return;
                    try {
                        run_task(t);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool)
            th.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    // Ordered reduction over integer counts: the aggregate is identical for
    // any worker count.
    std::vector<SweepRecord> records;
    records.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        const RateCodes& rc = codes[cell.rate_index];
        std::uint64_t d_ab = 0, d_ae = 0, censored = 0, block_errors = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            const TaskOut& out = results[c * blocks + b];
            d_ab += out.disagreements_ab;
            d_ae += out.disagreements_ae;
            censored += out.censored;
            block_errors += out.block_error;
        }
        const double total_bits = static_cast<double>(rc.plan.k) * static_cast<double>(blocks);
        SweepRecord rec;
        rec.snr_db = cell.snr_db;
        rec.scheme = cell.scheme;
        rec.llr_method = cell.method;
        rec.outer_rate = rc.plan.realized_rate;
        rec.key_length = rc.plan.k;
        rec.censored_mean = static_cast<double>(censored) / static_cast<double>(blocks);
        rec.bit_disagreement_prob = static_cast<double>(d_ab) / total_bits;
        rec.block_error_prob = static_cast<double>(block_errors) / static_cast<double>(blocks);
        rec.blocks = blocks;
        rec.eve_disagreement_prob = static_cast<double>(d_ae) / total_bits;
        records.push_back(rec);
    }
    return records;
}

namespace {

std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

const char* to_string(QuantizeScheme scheme) {
    return scheme == QuantizeScheme::one_bit ? "one_bit" : "censoring";
}

const char* to_string(LlrMethod method) {
    switch (method) {
    case LlrMethod::proposed: return "proposed";
    case LlrMethod::bpsk_approx: return "bpsk_approx";
    case LlrMethod::bpsk_exact: return "bpsk_exact";
    }
    return "?";
}

QuantizeScheme parse_scheme(const std::string& name) {
    if (name == "one_bit")
        return QuantizeScheme::one_bit;
    if (name == "censoring")
        return QuantizeScheme::censoring;
    throw config_error("unknown scheme '" + name + "' (expected one_bit or censoring)");
}

LlrMethod parse_llr_method(const std::string& name) {
    if (name == "proposed")
        return LlrMethod::proposed;
    if (name == "bpsk_approx")
        return LlrMethod::bpsk_approx;
    if (name == "bpsk_exact")
        return LlrMethod::bpsk_exact;
    throw config_error("unknown LLR method '" + name +
                       "' (expected proposed, bpsk_approx or bpsk_exact)");
}

std::string csv_header() {
    return "snr_db,scheme,llr_method,outer_rate,key_length,censored_mean,"
           "bit_disagreement_prob,block_error_prob,blocks,eve_disagreement_prob";
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out = csv_header();
    out.push_back('\n');
    for (const SweepRecord& r : records) {
        out += format_g6(r.snr_db);
        out.push_back(',');
        out += to_string(r.scheme);
        out.push_back(',');
        out += to_string(r.llr_method);
        out.push_back(',');
        out += format_g6(r.outer_rate);
        out.push_back(',');
        out += std::to_string(r.key_length);
        out.push_back(',');
        out += format_g6(r.censored_mean);
        out.push_back(',');
        out += format_g6(r.bit_disagreement_prob);
        out.push_back(',');
        out += format_g6(r.block_error_prob);
        out.push_back(',');
        out += std::to_string(r.blocks);
        out.push_back(',');
        out += format_g6(r.eve_disagreement_prob);
        out.push_back('\n');
    }
    return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    out << to_csv(records);
    out.flush();
    if (!out)
        throw io_error("write to '" + path + "' failed");
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        throw parse_error("empty CSV", 1);
    ++line_no;
    if (line != csv_header())
        throw parse_error("unexpected CSV header", line_no);

    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (fields.size() != 10)
            throw parse_error("expected 10 fields, got " + std::to_string(fields.size()), line_no);
        try {
            SweepRecord r;
            r.snr_db = std::stod(fields[0]);
            r.scheme = parse_scheme(fields[1]);
            r.llr_method = parse_llr_method(fields[2]);
            r.outer_rate = std::stod(fields[3]);
            r.key_length = std::stoull(fields[4]);
            r.censored_mean = std::stod(fields[5]);
            r.bit_disagreement_prob = std::stod(fields[6]);
            r.block_error_prob = std::stod(fields[7]);
            r.blocks = std::stoull(fields[8]);
            r.eve_disagreement_prob = std::stod(fields[9]);
            records.push_back(r);
        } catch (const config_error& e) {
            throw parse_error(e.what(), line_no);
        } catch (const std::exception&) {
            throw parse_error("malformed numeric field", line_no);
        }
    }
    return records;
}

std::vector<DecodeBenchRecord> decode_bench(const std::vector<double>& snr_db_list,
                                            std::size_t block_length, std::size_t blocks,
                                            std::uint64_t seed, double energy,
                                            double saturation, unsigned max_iters) {
    if (snr_db_list.empty())
        throw config_error("decode_bench: at least one SNR point required");
    if (blocks < 1)
        throw config_error("decode_bench: blocks must be at least 1");

    const std::size_t n = std::max<std::size_t>(((block_length + 5) / 6) * 6, 12);
    SystematicEncoder encoder;
    const SparseParityMatrix H =
        construct_full_rank(n, 3, 6, seed, kInnerCodeTag, 0xBE, &encoder);
    const std::size_t k = encoder.info_length();
    const double amp = std::sqrt(energy);

    std::vector<DecodeBenchRecord> out;
    for (std::size_t s = 0; s < snr_db_list.size(); ++s) {
        const double snr = snr_db_list[s];
        const double sigma2 = energy / std::pow(10.0, snr / 10.0);
        std::uint64_t raw_errors = 0, coded_errors = 0, failed = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            RngStream rng(seed, kTrialTag, s, b);
            std::vector<std::uint8_t> info(k);
            for (auto& bit : info)
                bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
            const auto encoded = encoder.encode(info);
            std::vector<double> symbols(n);
            for (std::size_t i = 0; i < n; ++i)
                symbols[i] = encoded.codeword[i] ? -amp : amp;
            const auto received = bpsk_awgn(symbols, energy, sigma2, rng);

            LlrVector llrs;
            llrs.values.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                raw_errors += quantize_bit(received[i]) != encoded.codeword[i];
                llrs.values[i] = llr_bpsk_approx(received[i], energy, sigma2);
            }
            saturate_in_place(llrs.values, saturation);
            llrs.saturation = saturation;

            const DecodeResult decoded = bp_decode(H, llrs, max_iters);
            failed += decoded.converged ? 0 : 1;
            const auto& info_pos = encoder.info_positions();
            for (std::size_t i = 0; i < k; ++i)
                coded_errors += decoded.bits[info_pos[i]] != info[i];
        }
        DecodeBenchRecord rec;
        rec.snr_db = snr;
        rec.raw_ber = static_cast<double>(raw_errors) / (static_cast<double>(n) * blocks);
        rec.coded_ber = static_cast<double>(coded_errors) / (static_cast<double>(k) * blocks);
        rec.info_bits = k * blocks;
        rec.blocks_failed = failed;
        out.push_back(rec);
    }
    return out;
}

} // namespace keysim
