// Throughput comparison of the serial reference loops against the
// OpenMP-parallel kernels (Monte-Carlo chain and analytic sweep).
#include "fas/mc_sim.hpp"
#include "fas/sweep.hpp"

#include <chrono>
#include <cstdio>

#include <omp.h>

using namespace fas;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main() {
    const int max_threads = omp_get_max_threads();
    std::printf("hardware threads available: %d\n\n", max_threads);

    { // Monte-Carlo chain
        FasConfig cfg = FasConfig::make(10, 4, CorrelationModel::from_w(0.2),
                                        std::pow(10.0, 1.0));
        ModulationScheme sch{Modulation::psk, 4};
        StopRule stop;
        stop.max_trials = 400000;
        stop.target_errors = 1LL << 60; // run the full budget
        McOptions serial;
        serial.serial_reference = true;
        McOptions parallel;

        auto t0 = std::chrono::steady_clock::now();
        McEstimate a = simulate_ser(cfg, sch, stop, serial);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        McEstimate b = simulate_ser(cfg, sch, stop, parallel);
        const double tp = seconds_since(t0);

        std::printf("monte-carlo chain (N=10, K=4, QPSK, %lld trials)\n",
                    (long long)a.trials);
        std::printf("  serial reference : %8.3f s  (%.2f Mtrials/s)\n", ts,
                    a.trials / ts / 1e6);
        std::printf("  openmp           : %8.3f s  (%.2f Mtrials/s)\n", tp,
                    b.trials / tp / 1e6);
        std::printf("  speedup          : %8.2fx\n", ts / tp);
        std::printf("  identical results: %s (errors %lld vs %lld)\n\n",
                    (a.errors == b.errors && a.trials == b.trials) ? "yes" : "NO",
                    a.errors, b.errors);
    }

    { // analytic sweep
        SweepSpec spec;
        spec.axis = SweepSpec::Axis::snr_db;
        for (int s = 0; s <= 20; s += 2) spec.values.push_back(s);
        spec.mods = {ModulationScheme{Modulation::ask, 4},
                     ModulationScheme{Modulation::psk, 8},
                     ModulationScheme{Modulation::qam, 16},
                     ModulationScheme{Modulation::bfsk, 2}};

        omp_set_num_threads(1);
        auto t0 = std::chrono::steady_clock::now();
        auto rows1 = run_sweep(spec);
        const double ts = seconds_since(t0);

        omp_set_num_threads(max_threads);
        t0 = std::chrono::steady_clock::now();
        auto rows2 = run_sweep(spec);
        const double tp = seconds_since(t0);

        bool same = rows1.size() == rows2.size();
        for (size_t i = 0; same && i < rows1.size(); ++i)
            same = rows1[i].sep_exact == rows2[i].sep_exact;

        std::printf("analytic sweep (%zu cells, exact + asymptotic)\n", rows1.size());
        std::printf("  single thread    : %8.3f s\n", ts);
        std::printf("  openmp           : %8.3f s\n", tp);
        std::printf("  speedup          : %8.2fx\n", ts / tp);
        std::printf("  identical results: %s\n", same ? "yes" : "NO");
    }
    return 0;
}
