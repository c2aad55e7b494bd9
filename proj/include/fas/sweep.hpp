#pragma once

#include "fas/mc_sim.hpp"
#include "fas/sep_analytic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fas {

struct SweepSpec {
    enum class Axis { snr_db, K, W } axis = Axis::snr_db;
    std::vector<double> values;

    int N = 10;
    int K = 4;
    std::optional<double> W = 0.2; // ignored when mu is set
    std::optional<double> mu;
    double snr_db = 10.0;
    double sigma_h2 = 1.0;

    std::vector<ModulationScheme> mods;

    bool with_mc = false;
    long long max_trials = 10000000;
    long long target_errors = 200;
    std::uint64_t seed = 1;
    long long chunk_size = 16384;

    SepOptions sep_opts;

    void validate() const;
};

struct SweepRow {
    double snr_db = 0.0;
    ModulationScheme mod;
    int N = 0, K = 0;
    std::optional<double> W;
    double mu = 0.0;
    double sep_exact = 0.0;
    SepMethod exact_method = SepMethod::closed_form;
    double sep_asym = 0.0;
    std::optional<McEstimate> mc;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Fixed-schema CSV; identical inputs produce identical bytes.
extern const char* kSweepCsvHeader;
std::string sweep_csv(const std::vector<SweepRow>& rows);

// 10-significant-digit scientific rendering used across all CSV output.
std::string format_sci(double v);

} // namespace fas
