#pragma once

#include "fas/cf_engine.hpp"
#include "fas/modem.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fas {

struct McEstimate {
    long long trials = 0;
    long long errors = 0;
    double ser = 0.0;
    double ci_low = 0.0;     // Wilson 95% interval
    double ci_high = 0.0;
    std::uint64_t seed = 0;
};

struct StopRule {
    long long max_trials = 100000000; // hard cap
    long long target_errors = 200;
};

struct McOptions {
    std::uint64_t seed = 1;
    long long chunk_size = 16384; // trials per RNG stream
    int threads = 0;              // 0 = library default
    bool serial_reference = false; // run the serial loop (identical results)
};

// Indices of the K largest values; ties broken by lower index.
std::vector<int> select_best_k(const std::vector<double>& snrs, int K);

// z = sum h* r / ||h||; throws on a zero channel vector.
std::complex<double> mrc_combine(const std::vector<std::complex<double>>& h_sel,
                                 const std::vector<std::complex<double>>& r_sel);

// One received sample of the full chain, exposed for white-box tests.
struct ReceiveSample {
    FadingVector h;
    std::vector<std::complex<double>> r;
    std::vector<int> selected;
    std::complex<double> z;
    double gamma_fas = 0.0;
    int tx_index = 0;
    int rx_index = 0;
};

ReceiveSample simulate_one(const FasConfig& cfg, const Constellation& cons,
                           std::mt19937_64& rng);

// Link-level SER estimate. Trials are processed in fixed-size chunks with
// per-chunk RNG streams derived from (seed, chunk); totals are exact integer
// sums over a prefix of chunks decided at fixed wave boundaries, so results
// are bit-identical for any thread count.
McEstimate simulate_ser(const FasConfig& cfg, const ModulationScheme& scheme,
                        const StopRule& stop, const McOptions& opts);

// Empirical characteristic function E[exp(x gamma_FAS)] over `trials` draws
// (no detection); returns mean and standard error.
struct McMoment {
    double mean = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};
McMoment empirical_cf(const FasConfig& cfg, double x, long long trials,
                      std::uint64_t seed);

// 95% Wilson score interval for e successes in n trials.
std::pair<double, double> wilson_interval(long long e, long long n);

} // namespace fas
