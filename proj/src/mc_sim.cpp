#include "fas/mc_sim.hpp"
#include "fas/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace fas {

std::vector<int> select_best_k(const std::vector<double>& snrs, int K) {
    const int N = (int)snrs.size();
    if (K < 1 || K > N) throw std::invalid_argument("select_best_k: K out of range");
    std::vector<int> idx((size_t)N);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return snrs[(size_t)a] > snrs[(size_t)b]; });
    idx.resize((size_t)K);
    return idx;
}

std::complex<double> mrc_combine(const std::vector<std::complex<double>>& h_sel,
                                 const std::vector<std::complex<double>>& r_sel) {
    if (h_sel.size() != r_sel.size() || h_sel.empty())
        throw std::invalid_argument("mrc_combine: size mismatch");
    double n2 = 0.0;
    std::complex<double> acc = 0.0;
    for (size_t k = 0; k < h_sel.size(); ++k) {
        n2 += std::norm(h_sel[k]);
        acc += std::conj(h_sel[k]) * r_sel[k];
    }
    if (n2 <= 0.0) throw std::invalid_argument("mrc_combine: zero channel vector");
    return acc / std::sqrt(n2);
}

ReceiveSample simulate_one(const FasConfig& cfg, const Constellation& cons,
                           std::mt19937_64& rng) {
    ReceiveSample out;
    const int N = cfg.N, K = cfg.K;
    const int M = (int)cons.points.size();
    out.tx_index = (int)(rng() % (std::uint64_t)M);
    const std::complex<double> s = cons.points[(size_t)out.tx_index];

    out.h = sample_fading(N, cfg.model, rng);
    const double sn = std::sqrt(cfg.sigma_n2);
    out.r.resize((size_t)N);
    for (int k = 0; k < N; ++k)
        out.r[(size_t)k] = out.h[(size_t)k] * s + sn * complex_gaussian(rng);

    std::vector<double> snrs((size_t)N);
    const double g = cfg.E_av / cfg.sigma_n2;
    for (int k = 0; k < N; ++k) snrs[(size_t)k] = g * std::norm(out.h[(size_t)k]);
    out.selected = select_best_k(snrs, K);

    std::vector<std::complex<double>> hs((size_t)K), rs((size_t)K);
    double hn2 = 0.0;
    for (int k = 0; k < K; ++k) {
        hs[(size_t)k] = out.h[(size_t)out.selected[(size_t)k]];
        rs[(size_t)k] = out.r[(size_t)out.selected[(size_t)k]];
        hn2 += std::norm(hs[(size_t)k]);
    }
    out.z = mrc_combine(hs, rs);
    out.gamma_fas = cfg.E_av * hn2 / cfg.sigma_n2;

    const double h_norm = std::sqrt(hn2);
    switch (cons.scheme.kind) {
        case Modulation::ask: out.rx_index = detect_ask(out.z, h_norm, cons); break;
        case Modulation::psk: out.rx_index = detect_psk(out.z, cons); break;
        case Modulation::bfsk: out.rx_index = detect_bfsk(out.z); break;
        case Modulation::qam: out.rx_index = detect_ml_generic(out.z, h_norm, cons); break;
    }
    return out;
}

namespace {

long long run_chunk(const FasConfig& cfg, const Constellation& cons,
                    std::uint64_t seed, long long chunk_index, long long trials) {
    std::mt19937_64 rng = make_stream(seed, (std::uint64_t)chunk_index);
    long long errors = 0;
    for (long long t = 0; t < trials; ++t) {
        const ReceiveSample s = simulate_one(cfg, cons, rng);
        if (s.rx_index != s.tx_index) ++errors;
    }
    return errors;
}

} // namespace

std::pair<double, double> wilson_interval(long long e, long long n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double p = (double)e / (double)n;
    const double denom = 1.0 + z2 / (double)n;
    const double center = (p + z2 / (2.0 * (double)n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / (double)n + z2 / (4.0 * (double)n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

McEstimate simulate_ser(const FasConfig& cfg, const ModulationScheme& scheme,
                        const StopRule& stop, const McOptions& opts) {
    cfg.validate();
    scheme.validate();
    if (stop.max_trials < 1)
        throw std::invalid_argument("simulate_ser: max_trials must be >= 1");
    const Constellation cons = build_constellation(scheme, cfg.E_av);

    const long long chunk = std::max(1LL, opts.chunk_size);
    const long long nchunks = (stop.max_trials + chunk - 1) / chunk;
    // fixed wave size keeps the stopping decision independent of thread count
    const long long wave = 32;

    long long done_trials = 0, errors = 0, next_chunk = 0;
    while (next_chunk < nchunks) {
        const long long first = next_chunk;
        const long long last = std::min(nchunks, first + wave);
        std::vector<long long> wave_errors((size_t)(last - first), 0);

        if (opts.serial_reference) {
            for (long long ci = first; ci < last; ++ci) {
                const long long trials =
                    std::min(chunk, stop.max_trials - ci * chunk);
                wave_errors[(size_t)(ci - first)] =
                    run_chunk(cfg, cons, opts.seed, ci, trials);
            }
        } else {
#pragma omp parallel for schedule(dynamic) num_threads( \
        opts.threads > 0 ? opts.threads : omp_get_max_threads())
            for (long long ci = first; ci < last; ++ci) {
                const long long trials =
                    std::min(chunk, stop.max_trials - ci * chunk);
                wave_errors[(size_t)(ci - first)] =
                    run_chunk(cfg, cons, opts.seed, ci, trials);
            }
        }
        for (long long ci = first; ci < last; ++ci) {
            errors += wave_errors[(size_t)(ci - first)];
            done_trials += std::min(chunk, stop.max_trials - ci * chunk);
        }
        next_chunk = last;
        if (errors >= stop.target_errors) break;
    }

    McEstimate est;
    est.trials = done_trials;
    est.errors = errors;
    est.ser = done_trials > 0 ? (double)errors / (double)done_trials : 0.0;
    auto [lo, hi] = wilson_interval(errors, done_trials);
    est.ci_low = lo;
    est.ci_high = hi;
    est.seed = opts.seed;
    return est;
}

McMoment empirical_cf(const FasConfig& cfg, double x, long long trials,
                      std::uint64_t seed) {
    cfg.validate();
    const double g = cfg.E_av / cfg.sigma_n2;
    double sum = 0.0, sum2 = 0.0;
#pragma omp parallel reduction(+ : sum, sum2)
    {
        const int nt = omp_get_num_threads();
        const int id = omp_get_thread_num();
        const long long per = (trials + nt - 1) / nt;
        const long long lo = (long long)id * per;
        const long long hi = std::min(trials, lo + per);
        if (lo < hi) {
            std::mt19937_64 rng = make_stream(seed, (std::uint64_t)id + 1000003ULL);
            for (long long t = lo; t < hi; ++t) {
                const FadingVector h = sample_fading(cfg.N, cfg.model, rng);
                std::vector<double> snrs((size_t)cfg.N);
                for (int k = 0; k < cfg.N; ++k) snrs[(size_t)k] = g * std::norm(h[(size_t)k]);
                std::vector<int> sel = select_best_k(snrs, cfg.K);
                double gam = 0.0;
                for (int k : sel) gam += snrs[(size_t)k];
                const double v = std::exp(x * gam);
                sum += v;
                sum2 += v * v;
            }
        }
    }
    McMoment m;
    m.trials = trials;
    m.mean = sum / (double)trials;
    const double var = std::max(0.0, sum2 / (double)trials - m.mean * m.mean);
    m.std_error = std::sqrt(var / (double)trials);
    return m;
}

} // namespace fas
