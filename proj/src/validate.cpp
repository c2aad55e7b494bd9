#include "fas/validate.hpp"

#include "fas/cf_onefactor.hpp"
#include "fas/mc_sim.hpp"
#include "fas/quadrature.hpp"
#include "fas/sep_analytic.hpp"
#include "fas/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>

#include <omp.h>

namespace fas {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

FasConfig mk(int N, int K, double mu, double gamma) {
    return FasConfig::make(N, K, CorrelationModel::from_mu(mu), gamma);
}

} // namespace

std::vector<CheckResult> validate_oracle(const ValidateOptions& opts) {
    const double mus[] = {0.0, 0.3, 0.7, 0.95};
    const double cs[] = {0.1, 0.5, 1.0, 3.0};
    const double thetas[] = {0.25 * kPi, 0.5 * kPi, 2.0 * kPi / 3.0, 0.75 * kPi};
    const double gammas[] = {0.5, 5.0, 50.0};

    struct Group {
        int N, K;
        double mu;
    };
    std::vector<Group> groups;
    for (int N = 1; N <= 6; ++N)
        for (int K = 1; K <= N; ++K)
            for (double mu : mus) groups.push_back({N, K, mu});

    std::vector<CheckResult> out(groups.size());
#pragma omp parallel for schedule(dynamic)
    for (long gi = 0; gi < (long)groups.size(); ++gi) {
        const Group g = groups[(size_t)gi];
        MassTableOptions mo;
        mo.pair_budget = opts.mass_pair_budget;
        MassTable table = build_mass_table(g.N, g.K, g.mu, mo);
        PartialFractionCache cache(g.K, g.N - g.K + 1);

        double worst = 0.0;
        long fallbacks = 0, pf_fail = 0;
        for (double c : cs) {
            for (double th : thetas) {
                for (double gam : gammas) {
                    IntegralSpec spec{c, th, mk(g.N, g.K, g.mu, gam)};
                    JOptions jo;
                    jo.quad_rel = 1e-10;
                    jo.quad_abs = 1e-14;
                    SepResult closed = integral_J(spec, jo, &table, &cache);
                    SepResult quad = integral_J_quadrature(
                        spec, QuadBackend::series_truncated, jo, &table);
                    const double rel = std::fabs(closed.value - quad.value) /
                                       std::max(std::fabs(quad.value), 1e-300);
                    worst = std::max(worst, rel);
                    fallbacks += closed.diag.kernel_fallbacks;
                    pf_fail += closed.diag.pf_failures;
                }
            }
        }
        CheckResult r;
        r.name = fmt("oracle/N%d_K%d_mu%.2f", g.N, g.K, g.mu);
        r.pass = worst <= 1e-8;
        r.detail = fmt("max_rel=%.3e p=%d sigs=%zu kernel_fallbacks=%ld pf_fail=%ld",
                       worst, table.p_reached, table.entries.size(), fallbacks,
                       pf_fail);
        out[(size_t)gi] = r;
    }
    return out;
}

std::vector<CheckResult> validate_special_cases(const ValidateOptions&) {
    std::vector<CheckResult> out;

    { // 2a / 2b: single-branch closed forms, any mu
        double worst_a = 0.0, worst_b = 0.0;
        for (double mu : {0.0, 0.5, 0.9}) {
            for (double gam : {0.5, 2.0, 10.0, 100.0}) {
                FasConfig cfg = mk(1, 1, mu, gam);
                const double bpsk = sep_psk(2, cfg).value;
                const double ref_a = 0.5 * (1.0 - std::sqrt(gam / (1.0 + gam)));
                worst_a = std::max(worst_a, std::fabs(bpsk - ref_a) / ref_a);
                const double bfsk = sep_bfsk(cfg).value;
                const double ref_b = 0.5 * (1.0 - std::sqrt(gam / (2.0 + gam)));
                worst_b = std::max(worst_b, std::fabs(bfsk - ref_b) / ref_b);
            }
        }
        out.push_back({"special/bpsk_single_branch", worst_a <= 1e-10,
                       fmt("max_rel=%.3e tol=1e-10", worst_a)});
        out.push_back({"special/bfsk_single_branch", worst_b <= 1e-10,
                       fmt("max_rel=%.3e tol=1e-10", worst_b)});
    }

    { // 2c: mu = 0 cf equals the iid best-K/MRC product form
        double worst = 0.0;
        for (int N : {2, 4, 6}) {
            for (int K = 1; K <= N; K += std::max(1, N / 2)) {
                FasConfig cfg = mk(N, K, 0.0, 3.0);
                for (double x : {-0.1, -1.0, -7.0}) {
                    const double a = cf_value(x, cfg).first;
                    const double b = cf_value_iid(x, cfg);
                    worst = std::max(worst, std::fabs(a - b) / std::fabs(b));
                }
            }
        }
        out.push_back({"special/iid_product_cf", worst <= 1e-10,
                       fmt("max_rel=%.3e tol=1e-10", worst)});
    }

    { // 2d: K = N, mu = 0 cf equals (1 - x Gamma)^-N
        double worst = 0.0;
        for (int N : {1, 3, 5}) {
            FasConfig cfg = mk(N, N, 0.0, 2.0);
            for (double x : {-0.2, -2.0}) {
                const double a = cf_value(x, cfg).first;
                const double b = std::pow(1.0 - x * 2.0, -(double)N);
                worst = std::max(worst, std::fabs(a - b) / std::fabs(b));
            }
        }
        out.push_back({"special/select_all_cf", worst <= 1e-10,
                       fmt("max_rel=%.3e tol=1e-10", worst)});
    }

    { // 2e: BPSK = 2-ASK
        double worst = 0.0;
        for (double mu : {0.0, 0.5, 0.95}) {
            for (double gam : {0.5, 10.0}) {
                FasConfig cfg = mk(4, 2, mu, gam);
                const double a = sep_psk(2, cfg).value;
                const double b = sep_ask(2, cfg).value;
                worst = std::max(worst, std::fabs(a - b) / std::max(a, 1e-300));
            }
        }
        out.push_back({"special/bpsk_equals_2ask", worst <= 1e-12,
                       fmt("max_rel=%.3e tol=1e-12", worst)});
    }

    { // 5: zero-SNR limits at Gamma = 1e-8
        double worst = 0.0;
        const double W02 = mu_from_w(0.2);
        for (auto [N, K, mu] : {std::tuple<int, int, double>{10, 4, W02},
                                {3, 2, 0.5}}) {
            FasConfig cfg = mk(N, K, mu, 1e-8);
            worst = std::max(worst, std::fabs(sep_ask(2, cfg).value - 0.5));
            worst = std::max(worst, std::fabs(sep_ask(4, cfg).value - 0.75));
            worst = std::max(worst, std::fabs(sep_psk(4, cfg).value - 0.75));
            worst = std::max(worst, std::fabs(sep_psk(8, cfg).value - 0.875));
            worst = std::max(worst, std::fabs(sep_qam(4, cfg).value - 0.75));
            worst = std::max(worst, std::fabs(sep_qam(16, cfg).value - (1 - 1.0 / 16)));
            worst = std::max(worst, std::fabs(sep_bfsk(cfg).value - 0.5));
        }
        out.push_back({"special/zero_snr_limits", worst <= 1e-4,
                       fmt("max_abs=%.3e tol=1e-4", worst)});
    }

    { // 7a: 1F2 series vs the J0-integral identity on W in [0.05, 5]
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double W = 0.05 * std::pow(100.0, i / 100.0);
            const double x = -kPi * kPi * W * W;
            const double a = specfun::hyp1f2_half_series(x);
            const double b = specfun::hyp1f2_half_integral(x);
            worst = std::max(worst, std::fabs(a - b) / std::fabs(b));
        }
        out.push_back({"special/hyp1f2_identity", worst <= 1e-10,
                       fmt("max_rel=%.3e tol=1e-10", worst)});
    }

    { // 7b: incomplete beta vs sin-power quadrature
        double worst = 0.0;
        for (int N = 1; N <= 8; ++N) {
            const double a = specfun::incomplete_beta_half(N + 0.5, 0.5);
            const double b =
                2.0 * integrate_adaptive(
                          [N](double th) {
                              return std::pow(std::sin(th), 2.0 * N);
                          },
                          0.0, 0.25 * kPi, 1e-15, 1e-14)
                          .value;
            worst = std::max(worst, std::fabs(a - b) / std::fabs(b));
        }
        out.push_back({"special/incomplete_beta_halfangle", worst <= 1e-10,
                       fmt("max_rel=%.3e tol=1e-10", worst)});
    }

    { // 7c: sin-power closed form vs quadrature
        double worst = 0.0;
        for (int N = 1; N <= 10; ++N) {
            for (double th : {0.3, 0.25 * kPi, 0.5 * kPi, 2.4, kPi}) {
                const double a = specfun::sin_power_integral(N, th);
                const double b = integrate_adaptive(
                                     [N](double t) {
                                         return std::pow(std::sin(t), 2.0 * N);
                                     },
                                     0.0, th, 1e-15, 1e-14)
                                     .value;
                worst = std::max(worst, std::fabs(a - b));
            }
        }
        out.push_back({"special/sin_power_closed_form", worst <= 1e-12,
                       fmt("max_abs=%.3e tol=1e-12", worst)});
    }

    return out;
}

std::vector<CheckResult> validate_mc(const ValidateOptions& opts) {
    std::vector<CheckResult> out;
    const double W02 = mu_from_w(0.2);
    const ModulationScheme schemes[] = {
        {Modulation::ask, 4}, {Modulation::psk, 4},
        {Modulation::qam, 16}, {Modulation::bfsk, 2}};
    int case_id = 0;
    for (double snr_db : {5.0, 10.0}) {
        const double gam = std::pow(10.0, snr_db / 10.0);
        FasConfig cfg = mk(10, 4, W02, gam);
        for (const auto& sch : schemes) {
            const double exact = sep(sch.kind, sch.M, cfg).value;
            StopRule stop;
            stop.max_trials = opts.mc_max_trials;
            stop.target_errors = 200;
            McOptions mo;
            mo.seed = opts.seed + (std::uint64_t)(++case_id);
            McEstimate est = simulate_ser(cfg, sch, stop, mo);
            const double sigma =
                std::sqrt(exact * (1.0 - exact) / (double)est.trials);
            const double dev = std::fabs(est.ser - exact);
            CheckResult r;
            r.name = fmt("mc/%s_snr%.0fdB", sch.name().c_str(), snr_db);
            r.pass = est.errors >= 200 && dev <= 3.0 * sigma;
            r.detail = fmt("exact=%.4e mc=%.4e dev=%.2f sigma errors=%lld trials=%lld",
                           exact, est.ser, sigma > 0 ? dev / sigma : 0.0,
                           est.errors, est.trials);
            out.push_back(r);
        }
    }
    return out;
}

std::vector<CheckResult> validate_asymptotic(const ValidateOptions&) {
    std::vector<CheckResult> out;
    const ModulationScheme schemes[] = {
        {Modulation::ask, 4}, {Modulation::psk, 4},
        {Modulation::qam, 16}, {Modulation::bfsk, 2}};

    { // ratio asymptotic/exact at Gamma = 1e4
        double lo = 1e300, hi = 0.0;
        for (int N : {2, 3}) {
            for (int K = 1; K <= N; ++K) {
                FasConfig cfg = mk(N, K, 0.5, 1e4);
                for (const auto& sch : schemes) {
                    const double exact = sep(sch.kind, sch.M, cfg).value;
                    const double asym = sep_asymptotic(sch.kind, sch.M, cfg).value;
                    const double ratio = asym / exact;
                    lo = std::min(lo, ratio);
                    hi = std::max(hi, ratio);
                }
            }
        }
        out.push_back({"asym/ratio_at_1e4", lo >= 0.9 && hi <= 1.1,
                       fmt("ratio range [%.4f, %.4f] target [0.9, 1.1]", lo, hi)});
    }

    { // diversity order: log-log slope over Gamma in [1e3, 1e5], N = 3
        const int N = 3;
        double worst = 0.0;
        for (int K = 1; K <= N; ++K) {
            for (const auto& sch : schemes) {
                std::vector<double> lx, ly;
                for (double e = 3.0; e <= 5.01; e += 0.5) {
                    const double gam = std::pow(10.0, e);
                    FasConfig cfg = mk(N, K, 0.5, gam);
                    lx.push_back(e);
                    ly.push_back(std::log10(sep(sch.kind, sch.M, cfg).value));
                }
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                const double n = (double)lx.size();
                for (size_t i = 0; i < lx.size(); ++i) {
                    sx += lx[i];
                    sy += ly[i];
                    sxx += lx[i] * lx[i];
                    sxy += lx[i] * ly[i];
                }
                const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                worst = std::max(worst, std::fabs(slope + (double)N) / (double)N);
            }
        }
        out.push_back({"asym/diversity_slope_N3", worst <= 0.05,
                       fmt("max relative slope deviation %.4f tol 0.05", worst)});
    }
    return out;
}

} // namespace fas
