#include "fas/sweep.hpp"
#include "fas/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <omp.h>

namespace fas {

const char* kSweepCsvHeader =
    "snr_db,mod,M,N,K,W,mu,sep_exact,sep_asym,sep_mc,mc_ci_low,mc_ci_high,"
    "trials,errors,seed";

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
    if (mods.empty()) throw std::invalid_argument("sweep: mods must be non-empty");
    for (const auto& m : mods) m.validate();
    if (N < 1) throw std::invalid_argument("sweep: N must be >= 1");
    for (double v : values) {
        switch (axis) {
            case Axis::K: {
                const int k = (int)std::llround(v);
                if (k < 1 || k > N || k != v)
                    throw std::invalid_argument("sweep: K values must be integers in [1, N]");
                break;
            }
            case Axis::W:
                if (!(v > 0)) throw std::invalid_argument("sweep: W values must be > 0");
                break;
            case Axis::snr_db:
                break;
        }
    }
    if (axis != Axis::K && (K < 1 || K > N))
        throw std::invalid_argument("sweep: need 1 <= K <= N");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();

    std::vector<ModulationScheme> mods = spec.mods;
    std::sort(mods.begin(), mods.end(), [](const auto& a, const auto& b) {
        return a.name() < b.name();
    });
    std::vector<double> values = spec.values;
    std::sort(values.begin(), values.end());

    const long ncells = (long)(mods.size() * values.size());
    std::vector<SweepRow> rows((size_t)ncells);

#pragma omp parallel for schedule(dynamic)
    for (long cell = 0; cell < ncells; ++cell) {
        {
            const size_t mi = (size_t)cell / values.size();
            const size_t vi = (size_t)cell % values.size();
            SweepRow row;
            row.mod = mods[mi];
            row.N = spec.N;
            double snr_db = spec.snr_db;
            int K = spec.K;
            std::optional<double> W = spec.mu ? std::nullopt : spec.W;
            std::optional<double> mu_direct = spec.mu;
            switch (spec.axis) {
                case SweepSpec::Axis::snr_db: snr_db = values[vi]; break;
                case SweepSpec::Axis::K: K = (int)std::llround(values[vi]); break;
                case SweepSpec::Axis::W:
                    W = values[vi];
                    mu_direct.reset();
                    break;
            }
            row.snr_db = snr_db;
            row.K = K;
            row.W = W;
            CorrelationModel model =
                mu_direct ? CorrelationModel::from_mu(*mu_direct, spec.sigma_h2)
                          : CorrelationModel::from_w(*W, spec.sigma_h2);
            row.mu = model.mu;
            const double gamma = std::pow(10.0, snr_db / 10.0);
            FasConfig cfg = FasConfig::make(spec.N, K, model, gamma);

            SepResult ex = sep(row.mod.kind, row.mod.M, cfg, spec.sep_opts);
            row.sep_exact = ex.value;
            row.exact_method = ex.method;
            row.sep_asym = sep_asymptotic(row.mod.kind, row.mod.M, cfg).value;

            if (spec.with_mc) {
                StopRule stop;
                stop.max_trials = spec.max_trials;
                stop.target_errors = spec.target_errors;
                McOptions mo;
                mo.seed = splitmix64(spec.seed ^ (0x5157ULL + mi * 1315423911ULL + vi));
                mo.chunk_size = spec.chunk_size;
                row.mc = simulate_ser(cfg, row.mod, stop, mo);
            }
            rows[(size_t)cell] = std::move(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += format_sci(r.snr_db);
        out += ',';
        out += modulation_name(r.mod.kind);
        out += ',';
        out += std::to_string(r.mod.M);
        out += ',';
        out += std::to_string(r.N);
        out += ',';
        out += std::to_string(r.K);
        out += ',';
        if (r.W) out += format_sci(*r.W);
        out += ',';
        out += format_sci(r.mu);
        out += ',';
        out += format_sci(r.sep_exact);
        out += ',';
        out += format_sci(r.sep_asym);
        out += ',';
        if (r.mc) out += format_sci(r.mc->ser);
        out += ',';
        if (r.mc) out += format_sci(r.mc->ci_low);
        out += ',';
        if (r.mc) out += format_sci(r.mc->ci_high);
        out += ',';
        if (r.mc) out += std::to_string(r.mc->trials);
        out += ',';
        if (r.mc) out += std::to_string(r.mc->errors);
        out += ',';
        if (r.mc) out += std::to_string((unsigned long long)r.mc->seed);
        out += '\n';
    }
    return out;
}

} // namespace fas
