// keysim -- physical-layer secret-key agreement simulator.
//
// Subcommands:
//   sweep         Monte-Carlo bit-disagreement sweep, CSV output
//   decode-bench  BER baseline of the rate-1/2 transport code
//   oracle        closed-form raw disagreement table
//   alist         emit / validate parity-check matrices

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "keysim/alist.hpp"
#include "keysim/errors.hpp"
#include "keysim/harness.hpp"

namespace {

std::vector<double> snr_range(double start, double stop, double step) {
    if (!(step > 0.0))
        throw keysim::config_error("--snr-step must be positive");
    if (stop < start)
        throw keysim::config_error("--snr-stop must not be below --snr-start");
    std::vector<double> snrs;
    for (double v = start; v <= stop + 1e-9; v += step)
        snrs.push_back(v);
    return snrs;
}

double parse_rate(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            const double num = std::stod(text.substr(0, slash));
            const double den = std::stod(text.substr(slash + 1));
            if (den == 0.0)
                throw keysim::config_error("rate denominator is zero");
            return num / den;
        }
        return std::stod(text);
    } catch (const std::invalid_argument&) {
        throw keysim::config_error("cannot parse rate '" + text + "'");
    }
}

struct SweepArgs {
    double snr_start = 0.0, snr_stop = 24.0, snr_step = 1.0;
    std::vector<std::string> rates{"1/2"};
    std::vector<std::string> schemes{"one_bit"};
    std::vector<std::string> methods{"proposed"};
    std::size_t block_length = 2048;
    std::size_t blocks = 200;
    std::uint64_t seed = 1;
    double gamma_fraction = 0.1;
    double transport_snr = std::numeric_limits<double>::quiet_NaN();
    double sigma2_h = 0.5;
    unsigned max_iters = 50;
    unsigned threads = 0;
    std::string out;
};

int run_sweep_command(const SweepArgs& args) {
    keysim::SweepConfig cfg;
    cfg.snr_db_list = snr_range(args.snr_start, args.snr_stop, args.snr_step);
    cfg.outer_rates.clear();
    for (const auto& r : args.rates)
        cfg.outer_rates.push_back(parse_rate(r));
    cfg.schemes.clear();
    for (const auto& s : args.schemes)
        cfg.schemes.push_back(keysim::parse_scheme(s));
    cfg.llr_methods.clear();
    for (const auto& m : args.methods)
        cfg.llr_methods.push_back(keysim::parse_llr_method(m));
    cfg.block_length = args.block_length;
    cfg.blocks_per_point = args.blocks;
    cfg.master_seed = args.seed;
    cfg.gamma_fraction = args.gamma_fraction;
    cfg.sigma2_h = args.sigma2_h;
    cfg.max_iters = args.max_iters;
    cfg.threads = args.threads;
    if (!std::isnan(args.transport_snr))
        cfg.transport_snr_db = args.transport_snr;

    const auto records = keysim::run_sweep(cfg);
    if (args.out == "-")
        std::cout << keysim::to_csv(records);
    else
        keysim::emit_csv(records, args.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physical-layer secret-key agreement simulator"};
    app.require_subcommand(1);

    // sweep ------------------------------------------------------------
    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo disagreement sweep");
    sweep->set_config("--config", "", "Flat key=value file mirroring the flags; flags win");
    sweep->add_option("--snr-start", sweep_args.snr_start, "First channel SNR in dB");
    sweep->add_option("--snr-stop", sweep_args.snr_stop, "Last channel SNR in dB");
    sweep->add_option("--snr-step", sweep_args.snr_step, "SNR step in dB");
    sweep->add_option("--rates", sweep_args.rates,
                      "Outer code rates, e.g. 1/2 3/4 4/5 9/10")->delimiter(',');
    sweep->add_option("--schemes", sweep_args.schemes,
                      "Quantization schemes: one_bit, censoring")->delimiter(',');
    sweep->add_option("--llr-methods", sweep_args.methods,
                      "Channel LLR methods: proposed, bpsk_approx, bpsk_exact")->delimiter(',');
    sweep->add_option("--block-length", sweep_args.block_length, "Nominal outer code length");
    sweep->add_option("--blocks", sweep_args.blocks, "Monte-Carlo blocks per sweep point");
    sweep->add_option("--seed", sweep_args.seed, "Master seed");
    sweep->add_option("--gamma-fraction", sweep_args.gamma_fraction,
                      "Censoring threshold as a fraction of the complex gain power");
    sweep->add_option("--transport-snr", sweep_args.transport_snr,
                      "Parity-link SNR in dB (default: equal to the channel SNR)");
    sweep->add_option("--sigma2-h", sweep_args.sigma2_h, "Per-component gain variance");
    sweep->add_option("--max-iters", sweep_args.max_iters, "Decoder iteration cap");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware)");
    sweep->add_option("--out", sweep_args.out, "CSV destination path, '-' for stdout")
        ->required();

    // decode-bench -------------------------------------------------------
    struct {
        double snr_start = 0.0, snr_stop = 6.0, snr_step = 0.5;
        std::size_t block_length = 2048;
        std::size_t blocks = 50;
        std::uint64_t seed = 1;
    } bench_args;
    CLI::App* bench = app.add_subcommand("decode-bench", "Transport-code BER baseline");
    bench->add_option("--snr-start", bench_args.snr_start, "First transport SNR in dB");
    bench->add_option("--snr-stop", bench_args.snr_stop, "Last transport SNR in dB");
    bench->add_option("--snr-step", bench_args.snr_step, "SNR step in dB");
    bench->add_option("--block-length", bench_args.block_length, "Transport code length");
    bench->add_option("--blocks", bench_args.blocks, "Blocks per SNR point");
    bench->add_option("--seed", bench_args.seed, "Master seed");

    // oracle -------------------------------------------------------------
    struct {
        double snr_start = 0.0, snr_stop = 24.0, snr_step = 1.0;
        std::size_t measure = 0;
        std::uint64_t seed = 1;
    } oracle_args;
    CLI::App* oracle = app.add_subcommand("oracle", "Closed-form raw disagreement table");
    oracle->add_option("--snr-start", oracle_args.snr_start, "First SNR in dB");
    oracle->add_option("--snr-stop", oracle_args.snr_stop, "Last SNR in dB");
    oracle->add_option("--snr-step", oracle_args.snr_step, "SNR step in dB");
    oracle->add_option("--measure", oracle_args.measure,
                       "Also print a Monte-Carlo estimate over this many components");
    oracle->add_option("--seed", oracle_args.seed, "Seed for --measure");

    // alist ----------------------------------------------------------------
    CLI::App* alist = app.add_subcommand("alist", "Parity-check matrix files");
    alist->require_subcommand(1);
    struct {
        std::size_t n = 2048;
        unsigned wc = 3, wr = 6;
        std::uint64_t seed = 1;
        std::string out;
    } emit_args;
    CLI::App* alist_emit = alist->add_subcommand("emit", "Construct a regular code and write it");
    alist_emit->add_option("--n", emit_args.n, "Code length");
    alist_emit->add_option("--wc", emit_args.wc, "Column weight");
    alist_emit->add_option("--wr", emit_args.wr, "Row weight");
    alist_emit->add_option("--seed", emit_args.seed, "Construction seed");
    alist_emit->add_option("--out", emit_args.out, "Destination path, '-' for stdout")->required();

    std::string validate_path;
    CLI::App* alist_validate = alist->add_subcommand("validate", "Load a matrix and report shape");
    alist_validate->add_option("path", validate_path, "alist file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (*sweep)
            return run_sweep_command(sweep_args);

        if (*bench) {
            const auto snrs =
                snr_range(bench_args.snr_start, bench_args.snr_stop, bench_args.snr_step);
            const auto records = keysim::decode_bench(snrs, bench_args.block_length,
                                                      bench_args.blocks, bench_args.seed);
            std::printf("snr_db,raw_ber,coded_ber,info_bits,blocks_failed\n");
            for (const auto& r : records)
                std::printf("%.6g,%.6g,%.6g,%zu,%zu\n", r.snr_db, r.raw_ber, r.coded_ber,
                            r.info_bits, r.blocks_failed);
            return 0;
        }

        if (*oracle) {
            const auto snrs =
                snr_range(oracle_args.snr_start, oracle_args.snr_stop, oracle_args.snr_step);
            if (oracle_args.measure == 0) {
                std::printf("snr_db,analytic_raw_disagreement\n");
                for (double snr : snrs)
                    std::printf("%.6g,%.6g\n", snr, keysim::analytic_raw_disagreement(snr));
            } else {
                std::printf("snr_db,analytic_raw_disagreement,measured\n");
                for (double snr : snrs)
                    std::printf("%.6g,%.6g,%.6g\n", snr, keysim::analytic_raw_disagreement(snr),
                                keysim::measure_raw_disagreement(snr, oracle_args.measure,
                                                                 oracle_args.seed));
            }
            return 0;
        }

        if (*alist_emit) {
            keysim::RngStream rng(emit_args.seed);
            const auto H =
                keysim::gallager_construct(emit_args.n, emit_args.wc, emit_args.wr, rng);
            if (emit_args.out == "-")
                std::cout << keysim::emit_alist(H);
            else
                keysim::emit_alist_file(H, emit_args.out);
            return 0;
        }

        if (*alist_validate) {
            const auto H = keysim::load_alist_file(validate_path);
            H.validate();
            std::size_t wc_min = SIZE_MAX, wc_max = 0, wr_min = SIZE_MAX, wr_max = 0;
            for (const auto& col : H.cols) {
                wc_min = std::min(wc_min, col.size());
                wc_max = std::max(wc_max, col.size());
            }
            for (const auto& row : H.rows) {
                wr_min = std::min(wr_min, row.size());
                wr_max = std::max(wr_max, row.size());
            }
            std::printf("ok: n=%zu m=%zu rate=%.6g edges=%zu col_weight=[%zu,%zu] "
                        "row_weight=[%zu,%zu]\n",
                        H.n, H.m, H.rate(), H.edge_count(), wc_min, wc_max, wr_min, wr_max);
            return 0;
        }
    } catch (const keysim::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const keysim::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) { // config_error, input_error
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
