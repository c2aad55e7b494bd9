#include <CLI11.hpp>

#include "fas/mc_sim.hpp"
#include "fas/sweep.hpp"
#include "fas/validate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <omp.h>

namespace {

using namespace fas;

std::vector<double> parse_values(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& item : items) {
        size_t start = 0;
        while (start <= item.size()) {
            size_t end = item.find(',', start);
            std::string tok = item.substr(
                start, end == std::string::npos ? std::string::npos : end - start);
            if (!tok.empty()) {
                const size_t c1 = tok.find(':');
                if (c1 != std::string::npos) {
                    const size_t c2 = tok.find(':', c1 + 1);
                    if (c2 == std::string::npos)
                        throw CLI::ValidationError("--values",
                                                   "range must be lo:step:hi");
                    const double lo = std::stod(tok.substr(0, c1));
                    const double step = std::stod(tok.substr(c1 + 1, c2 - c1 - 1));
                    const double hi = std::stod(tok.substr(c2 + 1));
                    if (step <= 0) throw CLI::ValidationError("--values", "step must be > 0");
                    for (double v = lo; v <= hi + 1e-12 * std::fabs(step); v += step)
                        out.push_back(v);
                } else {
                    out.push_back(std::stod(tok));
                }
            }
            if (end == std::string::npos) break;
            start = end + 1;
        }
    }
    return out;
}

CorrelationModel make_model(std::optional<double> mu, std::optional<double> W,
                            double sigma_h2) {
    if (mu) {
        if (W)
            std::cerr << "warning: --mu overrides --W (mu = " << *mu << ")\n";
        return CorrelationModel::from_mu(*mu, sigma_h2);
    }
    if (!W) throw CLI::ValidationError("config", "one of --W or --mu is required");
    return CorrelationModel::from_w(*W, sigma_h2);
}

std::string diag_string(const SepResult& r) {
    std::string d;
    if (r.diag.trunc) {
        d += "p_max=" + std::to_string(r.diag.trunc->p_max);
        d += ";tail_bound=" + format_sci(r.diag.trunc->tail_bound);
        d += std::string(";certified=") + (r.diag.trunc->converged ? "yes" : "no");
    }
    if (r.diag.quad_error) {
        if (!d.empty()) d += ";";
        d += "quad_err=" + format_sci(*r.diag.quad_error);
    }
    if (r.diag.kernel_fallbacks) {
        d += ";kernel_fallbacks=" + std::to_string(r.diag.kernel_fallbacks);
    }
    if (!r.diag.note.empty()) {
        if (!d.empty()) d += ";";
        d += r.diag.note;
    }
    return d;
}

int run_validate(const std::string& suite, const ValidateOptions& vopts) {
    std::vector<CheckResult> checks;
    auto append = [&](std::vector<CheckResult> v) {
        checks.insert(checks.end(), v.begin(), v.end());
    };
    if (suite == "oracle" || suite == "all") append(validate_oracle(vopts));
    if (suite == "special-cases" || suite == "all")
        append(validate_special_cases(vopts));
    if (suite == "mc" || suite == "all") append(validate_mc(vopts));
    if (suite == "asymptotic" || suite == "all") append(validate_asymptotic(vopts));

    int failures = 0;
    for (const auto& c : checks) {
        std::printf("%s %s %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu checks passed\n", (int)checks.size() - failures,
                checks.size());
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbol error probabilities for best-K/MRC fluid-antenna receivers"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (0 = default)");

    // ---- mu ----
    auto* cmd_mu = app.add_subcommand("mu", "port correlation coefficient from aperture W");
    double mu_W = 0.0;
    cmd_mu->add_option("--W", mu_W, "aperture length in wavelengths")->required();

    // ---- shared config flags ----
    struct CfgFlags {
        int N = 10, K = 4;
        std::optional<double> W, mu;
        double snr_db = 10.0;
        double sigma_h2 = 1.0;
    };
    auto add_cfg = [](CLI::App* c, CfgFlags& f) {
        c->add_option("--N", f.N, "number of ports");
        c->add_option("--K", f.K, "selected ports");
        c->add_option("--W", f.W, "aperture length in wavelengths");
        c->add_option("--mu", f.mu, "port correlation (overrides --W)");
        c->add_option("--snr-db", f.snr_db, "average SNR in dB");
        c->add_option("--sigma-h2", f.sigma_h2, "per-port fading power");
    };

    // ---- sep ----
    auto* cmd_sep = app.add_subcommand("sep", "one analytic SEP evaluation");
    CfgFlags sep_cfg;
    sep_cfg.W = 0.2;
    add_cfg(cmd_sep, sep_cfg);
    std::string sep_mod = "bfsk";
    int sep_M = 2;
    std::string sep_method = "exact";
    cmd_sep->add_option("--mod", sep_mod, "ask|psk|qam|bfsk");
    cmd_sep->add_option("--M", sep_M, "modulation order");
    cmd_sep->add_option("--method", sep_method, "exact|asym|quad")
        ->check(CLI::IsMember({"exact", "asym", "quad"}));

    // ---- sweep ----
    auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    CfgFlags sw_cfg;
    sw_cfg.W = 0.2;
    add_cfg(cmd_sweep, sw_cfg);
    std::string sw_axis = "snr_db";
    std::vector<std::string> sw_values;
    std::vector<std::string> sw_mods = {"ask2", "ask4", "psk4", "psk8", "qam16", "bfsk"};
    std::string sw_out = "-";
    bool sw_with_mc = false;
    long long sw_trials = 10000000, sw_target_errors = 200, sw_chunk = 16384;
    std::uint64_t sw_seed = 1;
    cmd_sweep->add_option("--axis", sw_axis, "snr_db|K|W")
        ->check(CLI::IsMember({"snr_db", "K", "W"}));
    cmd_sweep->add_option("--values", sw_values,
                          "comma list and/or lo:step:hi ranges")->required();
    cmd_sweep->add_option("--mods", sw_mods, "modulation tokens, e.g. qam16,psk8");
    cmd_sweep->add_option("--out", sw_out, "output CSV path ('-' = stdout)");
    cmd_sweep->add_flag("--with-mc", sw_with_mc, "add Monte-Carlo columns");
    cmd_sweep->add_option("--trials", sw_trials, "MC max trials per point");
    cmd_sweep->add_option("--target-errors", sw_target_errors, "MC stop after this many errors");
    cmd_sweep->add_option("--seed", sw_seed, "MC seed");
    cmd_sweep->add_option("--chunk-size", sw_chunk, "MC trials per RNG stream");

    // ---- simulate ----
    auto* cmd_sim = app.add_subcommand("simulate", "Monte-Carlo SER estimate");
    CfgFlags sim_cfg;
    sim_cfg.W = 0.2;
    add_cfg(cmd_sim, sim_cfg);
    std::string sim_mod = "bfsk";
    int sim_M = 2;
    long long sim_trials = 10000000, sim_target_errors = 200, sim_chunk = 16384;
    std::uint64_t sim_seed = 1;
    bool sim_serial = false;
    cmd_sim->add_option("--mod", sim_mod, "ask|psk|qam|bfsk");
    cmd_sim->add_option("--M", sim_M, "modulation order");
    cmd_sim->add_option("--trials", sim_trials, "max trials");
    cmd_sim->add_option("--target-errors", sim_target_errors, "stop after this many errors");
    cmd_sim->add_option("--seed", sim_seed, "seed");
    cmd_sim->add_option("--chunk-size", sim_chunk, "trials per RNG stream");
    cmd_sim->add_flag("--serial", sim_serial, "single-threaded reference loop");

    // ---- validate ----
    auto* cmd_val = app.add_subcommand("validate", "run acceptance suites");
    std::string val_suite = "all";
    double val_trials = 1e7;
    std::uint64_t val_seed = 20250809;
    cmd_val->add_option("--suite", val_suite, "oracle|special-cases|mc|asymptotic|all")
        ->check(CLI::IsMember({"oracle", "special-cases", "mc", "asymptotic", "all"}));
    cmd_val->add_option("--trials", val_trials, "MC max trials per check");
    cmd_val->add_option("--seed", val_seed, "MC seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (app.got_subcommand(cmd_mu)) {
            if (!(mu_W > 0)) {
                std::cerr << "error: W must be positive\n";
                return 2;
            }
            std::printf("%.6g\n", mu_from_w(mu_W));
            return 0;
        }

        if (app.got_subcommand(cmd_sep)) {
            const Modulation mod = modulation_from_name(sep_mod);
            if (mod == Modulation::bfsk) sep_M = 2;
            CorrelationModel model = make_model(sep_cfg.mu, sep_cfg.W, sep_cfg.sigma_h2);
            const double gamma = std::pow(10.0, sep_cfg.snr_db / 10.0);
            FasConfig cfg = FasConfig::make(sep_cfg.N, sep_cfg.K, model, gamma);
            SepOptions so;
            if (sep_method == "quad") so.path = SepOptions::Path::quadrature;
            if (sep_method == "asym") so.path = SepOptions::Path::asymptotic;
            SepResult r = sep(mod, sep_M, cfg, so);
            std::string diag = diag_string(r);
            if (sep_method == "asym") {
                const double exact = sep(mod, sep_M, cfg).value;
                if (exact > 0) {
                    if (!diag.empty()) diag += ";";
                    diag += "asym_exact_ratio=" + format_sci(r.value / exact);
                }
            }
            std::printf("snr_db,mod,M,N,K,W,mu,sep,method,diag\n");
            std::printf("%s,%s,%d,%d,%d,%s,%s,%s,%s,%s\n",
                        format_sci(sep_cfg.snr_db).c_str(), modulation_name(mod),
                        sep_M, cfg.N, cfg.K,
                        model.W ? format_sci(*model.W).c_str() : "",
                        format_sci(model.mu).c_str(), format_sci(r.value).c_str(),
                        sep_method_name(r.method), diag.c_str());
            return 0;
        }

        if (app.got_subcommand(cmd_sweep)) {
            SweepSpec spec;
            if (sw_axis == "snr_db") spec.axis = SweepSpec::Axis::snr_db;
            if (sw_axis == "K") spec.axis = SweepSpec::Axis::K;
            if (sw_axis == "W") spec.axis = SweepSpec::Axis::W;
            spec.values = parse_values(sw_values);
            spec.N = sw_cfg.N;
            spec.K = sw_cfg.K;
            spec.W = sw_cfg.W;
            spec.mu = sw_cfg.mu;
            if (spec.mu && sw_cfg.W)
                std::cerr << "warning: --mu overrides --W (mu = " << *spec.mu << ")\n";
            spec.snr_db = sw_cfg.snr_db;
            spec.sigma_h2 = sw_cfg.sigma_h2;
            std::vector<std::string> tokens;
            for (const auto& m : sw_mods) {
                size_t start = 0;
                while (start <= m.size()) {
                    const size_t end = m.find(',', start);
                    const std::string tok = m.substr(
                        start, end == std::string::npos ? std::string::npos : end - start);
                    if (!tok.empty()) tokens.push_back(tok);
                    if (end == std::string::npos) break;
                    start = end + 1;
                }
            }
            for (const auto& t : tokens)
                spec.mods.push_back(ModulationScheme::parse(t));
            spec.with_mc = sw_with_mc;
            spec.max_trials = sw_trials;
            spec.target_errors = sw_target_errors;
            spec.seed = sw_seed;
            spec.chunk_size = sw_chunk;

            const std::string csv = sweep_csv(run_sweep(spec));
            if (sw_out == "-") {
                std::fwrite(csv.data(), 1, csv.size(), stdout);
            } else {
                std::ofstream f(sw_out, std::ios::binary);
                if (!f) {
                    std::cerr << "error: cannot open output file " << sw_out << "\n";
                    return 2;
                }
                f.write(csv.data(), (std::streamsize)csv.size());
            }
            return 0;
        }

        if (app.got_subcommand(cmd_sim)) {
            const Modulation mod = modulation_from_name(sim_mod);
            if (mod == Modulation::bfsk) sim_M = 2;
            CorrelationModel model = make_model(sim_cfg.mu, sim_cfg.W, sim_cfg.sigma_h2);
            const double gamma = std::pow(10.0, sim_cfg.snr_db / 10.0);
            FasConfig cfg = FasConfig::make(sim_cfg.N, sim_cfg.K, model, gamma);
            ModulationScheme sch{mod, sim_M};
            StopRule stop{sim_trials, sim_target_errors};
            McOptions mo;
            mo.seed = sim_seed;
            mo.chunk_size = sim_chunk;
            mo.serial_reference = sim_serial;

            SweepRow row;
            row.snr_db = sim_cfg.snr_db;
            row.mod = sch;
            row.N = cfg.N;
            row.K = cfg.K;
            row.W = model.W;
            row.mu = model.mu;
            SepResult ex = sep(mod, sim_M, cfg);
            row.sep_exact = ex.value;
            row.sep_asym = sep_asymptotic(mod, sim_M, cfg).value;
            row.mc = simulate_ser(cfg, sch, stop, mo);
            const std::string csv = sweep_csv({row});
            std::fwrite(csv.data(), 1, csv.size(), stdout);
            return 0;
        }

        if (app.got_subcommand(cmd_val)) {
            ValidateOptions vopts;
            vopts.mc_max_trials = (long long)val_trials;
            vopts.seed = val_seed;
            return run_validate(val_suite, vopts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
