#include "fas/sep_analytic.hpp"
#include "fas/cf_onefactor.hpp"
#include "fas/quadrature.hpp"
#include "fas/rng.hpp"
#include "fas/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

double theta_sin2_max(double theta) {
    return theta >= kHalfPi ? 1.0 : std::sin(theta) * std::sin(theta);
}

} // namespace

void IntegralSpec::validate() const {
    cfg.validate();
    if (!(c > 0.0)) throw std::invalid_argument("IntegralSpec: c must be > 0");
    if (!(Theta > 0.0) || !(Theta < kPi))
        throw std::invalid_argument("IntegralSpec: Theta must lie in (0, pi)");
}

// ---------------------------------------------------------------------------
// scalar kernels
// ---------------------------------------------------------------------------

double calH(int i, double ck, double Theta) {
    if (i < 1) throw std::invalid_argument("calH: i must be >= 1");
    if (!(ck > 0.0)) throw std::invalid_argument("calH: ck must be > 0");
    const long double c = ck;
    const long double sq = std::sqrt(1.0L + c);

    long double bracket0; // branch-corrected inverse-tangent term
    long double tn = 0.0L;
    bool at_half = std::fabs(Theta - kHalfPi) < 1e-13;
    if (at_half) {
        bracket0 = 0.5L * (long double)kPi;
    } else if (Theta < kHalfPi) {
        tn = std::tan((long double)Theta);
        bracket0 = std::atan(sq * tn);
    } else {
        tn = std::tan((long double)Theta); // negative
        bracket0 = (long double)kPi - std::atan(sq * std::fabs(tn));
    }

    const long double u = at_half ? 0.0L : 1.0L / (1.0L + (1.0L + c) * tn * tn);
    long double total = 0.0L;
    long double cl = 1.0L; // C(i-1,l) C(2l,l) (c/4)^l
    long double inner_tail = 0.0L; // sum_p 4^p / (C(2p,p) p) u^p, grown with l
    long double fourp_over_binp_u = 1.0L;
    for (int l = 0; l < i; ++l) {
        if (l >= 1) {
            cl *= (long double)(i - l) / l          // C(i-1,l)
                  * (long double)(2 * l) * (2 * l - 1) / ((long double)l * l) // C(2l,l)
                  * (c / 4.0L);
            fourp_over_binp_u *= 4.0L * u * (long double)l * l /
                                 ((long double)(2 * l) * (2 * l - 1));
            inner_tail += fourp_over_binp_u / l;
        }
        long double term = bracket0;
        if (!at_half && l >= 1) term += sq * tn * 0.5L * inner_tail;
        total += cl * term;
    }
    total /= (long double)kPi * std::pow(1.0L + c, (long double)i - 0.5L);
    return (double)total;
}

double calG(int n, double ck, double Theta, long* fallback_counter) {
    if (n < 1) throw std::invalid_argument("calG: n must be >= 1");
    long double sum = (long double)Theta / kPi;
    long double maxterm = std::fabs((double)sum);
    long double binom = 1.0L;
    for (int i = 1; i <= n; ++i) {
        binom *= (long double)(n - i + 1) / i;
        const long double term =
            ((i % 2) ? -1.0L : 1.0L) * binom * (long double)calH(i, ck, Theta);
        sum += term;
        maxterm = std::max(maxterm, std::fabs((long double)term));
    }
    // binomial transform loses digits when the result is far below the
    // largest term; recompute from the positive-integrand representation
    if (std::fabs((double)sum) < 1e-11 * (double)maxterm) {
        if (fallback_counter) ++*fallback_counter;
        auto f = [&](double th) {
            const double s2 = std::sin(th) * std::sin(th);
            return std::pow(ck * s2 / (1.0 + ck * s2), (double)n);
        };
        return integrate_adaptive(f, 0.0, Theta, 1e-300, 1e-12).value / kPi;
    }
    return (double)sum;
}

// ---------------------------------------------------------------------------
// partial fractions
// ---------------------------------------------------------------------------

PartialFractionCoeffs partial_fraction_coeffs(const std::vector<double>& sigma,
                                              const std::vector<int>& eta) {
    if (sigma.size() != eta.size() || sigma.empty())
        throw std::invalid_argument("partial_fraction_coeffs: size mismatch");
    const int Nt = (int)sigma.size();
    PartialFractionCoeffs out;
    out.sigma = sigma;
    out.eta = eta;
    out.alpha.resize((size_t)Nt);

    std::vector<long double> d, fac;
    for (int k = 0; k < Nt; ++k) {
        const int m = eta[(size_t)k] - 1;
        long double pref = 1.0L;
        for (int p = 0; p < Nt; ++p) {
            if (p == k) continue;
            pref *= std::pow((long double)sigma[(size_t)k] /
                                 (sigma[(size_t)k] - sigma[(size_t)p]),
                             (long double)eta[(size_t)p]);
        }
        d.assign((size_t)m + 1, 0.0L);
        d[0] = 1.0L;
        for (int p = 0; p < Nt; ++p) {
            if (p == k) continue;
            const long double cp = (long double)sigma[(size_t)p] /
                                   (sigma[(size_t)k] - sigma[(size_t)p]);
            fac.assign((size_t)m + 1, 0.0L);
            fac[0] = 1.0L;
            for (int j = 1; j <= m; ++j)
                fac[(size_t)j] = fac[(size_t)j - 1] * (-cp) *
                                 (long double)(eta[(size_t)p] + j - 1) / j;
            // convolve d *= fac, truncated at degree m
            for (int j = m; j >= 0; --j) {
                long double acc = 0.0L;
                for (int i = 0; i <= j; ++i) acc += d[(size_t)i] * fac[(size_t)(j - i)];
                d[(size_t)j] = acc;
            }
        }
        auto& ak = out.alpha[(size_t)k];
        ak.resize((size_t)eta[(size_t)k]);
        for (int n = 1; n <= eta[(size_t)k]; ++n)
            ak[(size_t)n - 1] = pref * d[(size_t)(eta[(size_t)k] - n)];
    }

    // validation at 5 deterministic sample points around the bulk scale
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int e : eta) h = splitmix64(h ^ (std::uint64_t)e);
    double sig_max = *std::max_element(sigma.begin(), sigma.end());
    int eta_tot = 0;
    for (int e : eta) eta_tot += e;
    double max_rel = 0.0;
    for (int j = 0; j < 5; ++j) {
        h = splitmix64(h);
        const double u = (double)(h >> 11) * 0x1.0p-53;
        const double t = sig_max * std::max(1, eta_tot) *
                         std::exp(std::log(0.3) + u * std::log(10.0 / 0.3));
        long double exact = 1.0L;
        for (int k = 0; k < Nt; ++k)
            exact *= std::pow((long double)t / (t + sigma[(size_t)k]),
                              (long double)eta[(size_t)k]);
        long double recon = 0.0L;
        for (int k = 0; k < Nt; ++k) {
            const long double base = (long double)t / (t + sigma[(size_t)k]);
            long double bp = 1.0L;
            for (int n = 1; n <= eta[(size_t)k]; ++n) {
                bp *= base;
                recon += out.alpha[(size_t)k][(size_t)n - 1] * bp;
            }
        }
        const double rel = std::fabs((double)(recon - exact)) /
                           std::max(std::fabs((double)exact), 1e-300);
        max_rel = std::max(max_rel, rel);
    }
    out.recon_error = max_rel;
    out.validated = max_rel <= 1e-8;
    return out;
}

size_t PartialFractionCache::Hash::operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ULL;
    for (int x : v) {
        h ^= (size_t)(x + 0x9e37);
        h *= 1099511628211ULL;
    }
    return h;
}

PartialFractionCache::PartialFractionCache(int K, int Ntilde)
    : K_(K), Ntilde_(Ntilde) {}

const PartialFractionCoeffs& PartialFractionCache::get(const std::vector<int>& eta) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(eta);
        if (it != map_.end()) return it->second;
    }
    std::vector<double> sigma((size_t)eta.size());
    for (size_t j = 0; j < eta.size(); ++j)
        sigma[j] = 1.0 / (double)(K_ + (int)j); // scale-invariant family
    PartialFractionCoeffs pf = partial_fraction_coeffs(sigma, eta);
    std::lock_guard<std::mutex> lock(mu_);
    if (!pf.validated) ++failures_;
    return map_.emplace(eta, std::move(pf)).first->second;
}

// ---------------------------------------------------------------------------
// F_eta and the closed-form J
// ---------------------------------------------------------------------------

namespace {

double calF_numeric(const std::vector<int>& eta, const std::vector<double>& sigma,
                    double Theta) {
    auto f = [&](double th) {
        const double s2 = std::sin(th) * std::sin(th);
        if (s2 <= 0.0) return 0.0;
        double lg = 0.0;
        for (size_t j = 0; j < eta.size(); ++j)
            lg += (double)eta[j] * std::log(s2 / (s2 + sigma[j]));
        return std::exp(lg);
    };
    return integrate_adaptive(f, 0.0, Theta, 1e-300, 1e-12).value / kPi;
}

// kernel tables for one (c, Theta, cfg) context
struct KernelContext {
    std::vector<double> sigma;              // c * beta * K * G / (K + j)
    double Theta;
    std::vector<std::vector<double>> G;     // G[k][n-1]
    long kernel_fallbacks = 0;

    void ensure(int k, int nmax) {
        auto& gk = G[(size_t)k];
        while ((int)gk.size() < nmax) {
            const int n = (int)gk.size() + 1;
            gk.push_back(calG(n, 1.0 / sigma[(size_t)k], Theta, &kernel_fallbacks));
        }
    }
};

} // namespace

double calF(const std::vector<int>& eta, const IntegralSpec& spec,
            PartialFractionCache& cache, SepDiagnostics* diag) {
    spec.validate();
    const double beta = 1.0 - spec.cfg.model.mu * spec.cfg.model.mu;
    const double G = spec.cfg.gamma_av();
    std::vector<double> sigma(eta.size());
    for (size_t j = 0; j < eta.size(); ++j)
        sigma[j] = spec.c * beta * spec.cfg.K * G / (double)(spec.cfg.K + (int)j);

    const PartialFractionCoeffs& pf = cache.get(eta);
    if (!pf.validated) {
        if (diag) ++diag->pf_failures;
        return calF_numeric(eta, sigma, spec.Theta);
    }
    long double sum = 0.0L, amax = 0.0L;
    long fallbacks = 0;
    for (size_t k = 0; k < eta.size(); ++k) {
        for (int n = 1; n <= eta[k]; ++n) {
            const long double g = calG(n, 1.0 / sigma[k], spec.Theta, &fallbacks);
            const long double term = pf.alpha[k][(size_t)n - 1] * g;
            sum += term;
            amax = std::max(amax, std::fabs((long double)term));
        }
    }
    if (diag) diag->kernel_fallbacks += fallbacks;
    if (std::fabs((double)sum) < 1e-8 * (double)amax) {
        if (diag) ++diag->kernel_fallbacks;
        return calF_numeric(eta, sigma, spec.Theta);
    }
    return (double)sum;
}

SepResult integral_J(const IntegralSpec& spec, const JOptions& opts,
                     const MassTable* shared_table,
                     PartialFractionCache* shared_cache) {
    spec.validate();
    const FasConfig& cfg = spec.cfg;
    MassTable local;
    const MassTable* table = shared_table;
    if (!table) {
        MassTableOptions mo = opts.mass;
        mo.tol = std::min(mo.tol, opts.tol);
        local = build_mass_table(cfg.N, cfg.K, cfg.model.mu, mo);
        table = &local;
    }
    PartialFractionCache local_cache(cfg.K, cfg.N - cfg.K + 1);
    PartialFractionCache& cache = shared_cache ? *shared_cache : local_cache;

    const double beta = 1.0 - cfg.model.mu * cfg.model.mu;
    const double G = cfg.gamma_av();
    KernelContext kc;
    kc.Theta = spec.Theta;
    const int Nt = cfg.N - cfg.K + 1;
    kc.sigma.resize((size_t)Nt);
    for (int j = 0; j < Nt; ++j)
        kc.sigma[(size_t)j] = spec.c * beta * cfg.K * G / (double)(cfg.K + j);
    kc.G.assign((size_t)Nt, {});

    std::vector<int> maxn((size_t)Nt, 0);
    for (const auto& e : table->entries)
        for (size_t j = 0; j < e.eta.size(); ++j)
            maxn[j] = std::max(maxn[j], e.eta[(size_t)j]);
    for (int k = 0; k < Nt; ++k) kc.ensure(k, maxn[(size_t)k]);

    SepResult res;
    res.method = SepMethod::closed_form;
    long double acc = 0.0L;
    for (const auto& e : table->entries) {
        const PartialFractionCoeffs& pf = cache.get(e.eta);
        long double F;
        if (!pf.validated) {
            ++res.diag.pf_failures;
            std::vector<double> sig(e.eta.size());
            for (size_t j = 0; j < e.eta.size(); ++j) sig[j] = kc.sigma[j];
            F = calF_numeric(e.eta, sig, spec.Theta);
        } else {
            long double sum = 0.0L, amax = 0.0L;
            for (size_t k = 0; k < e.eta.size(); ++k) {
                const auto& gk = kc.G[k];
                const auto& ak = pf.alpha[k];
                for (int n = 1; n <= e.eta[k]; ++n) {
                    const long double term = ak[(size_t)n - 1] * (long double)gk[(size_t)n - 1];
                    sum += term;
                    amax = std::max(amax, std::fabs((long double)term));
                }
            }
            if (std::fabs((double)sum) < 1e-8 * (double)amax) {
                ++res.diag.kernel_fallbacks;
                std::vector<double> sig(kc.sigma.begin(), kc.sigma.end());
                F = calF_numeric(e.eta, sig, spec.Theta);
            } else {
                F = sum;
            }
        }
        acc += (long double)e.mass * F;
    }
    res.diag.kernel_fallbacks += kc.kernel_fallbacks;
    res.value = (double)acc;

    // rigorous bound on the discarded series tail of J
    const double x_weakest = -spec.c / theta_sin2_max(spec.Theta);
    const double damping =
        pole_damping(x_weakest, cfg, cfg.N + table->p_reached + 1);
    const double tail =
        std::min(table->deficit, table->apriori_tail(table->p_reached)) *
        damping * (spec.Theta / kPi);
    CfTruncation tr;
    tr.p_max = table->p_reached;
    tr.tail_bound = tail;
    tr.tol = opts.tol;
    tr.converged = tail <= std::max(1e-14, opts.tol * std::fabs(res.value));
    res.diag.trunc = tr;
    return res;
}

// ---------------------------------------------------------------------------
// quadrature paths
// ---------------------------------------------------------------------------

namespace {

// Psi from a mass table via per-theta pole logs (fast enough for the oracle grid)
struct TablePsi {
    const MassTable* table;
    std::vector<double> scale; // beta K G / (K + j)
    mutable std::vector<double> lf;

    explicit TablePsi(const MassTable& t, const FasConfig& cfg) : table(&t) {
        const double beta = 1.0 - cfg.model.mu * cfg.model.mu;
        const double G = cfg.gamma_av();
        const int Nt = cfg.N - cfg.K + 1;
        scale.resize((size_t)Nt);
        for (int j = 0; j < Nt; ++j)
            scale[(size_t)j] = beta * cfg.K * G / (double)(cfg.K + j);
        lf.resize((size_t)Nt);
    }

    double operator()(double x) const {
        for (size_t j = 0; j < scale.size(); ++j)
            lf[j] = std::log1p(-x * scale[j]);
        double acc = 0.0;
        for (const auto& e : table->entries) {
            double s = 0.0;
            for (size_t j = 0; j < e.eta.size(); ++j) s += e.eta[j] * lf[j];
            acc += e.mass * std::exp(-s);
        }
        return acc;
    }
};

} // namespace

SepResult integral_J_quadrature(const IntegralSpec& spec, QuadBackend backend,
                                const JOptions& opts, const MassTable* shared_table) {
    spec.validate();
    const FasConfig& cfg = spec.cfg;
    SepResult res;
    res.method = SepMethod::quadrature;

    MassTable local;
    const MassTable* table = nullptr;
    if (backend == QuadBackend::series_truncated) {
        table = shared_table;
        if (!table) {
            MassTableOptions mo = opts.mass;
            mo.tol = std::min(mo.tol, opts.tol);
            local = build_mass_table(cfg.N, cfg.K, cfg.model.mu, mo);
            table = &local;
        }
        CfTruncation tr;
        tr.p_max = table->p_reached;
        tr.tol = opts.tol;
        const double x_weakest = -spec.c / theta_sin2_max(spec.Theta);
        tr.tail_bound =
            std::min(table->deficit, table->apriori_tail(table->p_reached)) *
            pole_damping(x_weakest, cfg, cfg.N + table->p_reached + 1) *
            (spec.Theta / kPi);
        tr.converged = tr.tail_bound <= std::max(1e-14, opts.tol);
        res.diag.trunc = tr;
    }

    if (backend == QuadBackend::one_factor) {
        OneFactorJResult r = integral_J_onefactor(spec.c, spec.Theta, cfg,
                                                  opts.quad_rel, opts.quad_abs);
        res.value = r.value;
        res.diag.quad_error = r.error_estimate;
        return res;
    }

    TablePsi table_psi(*table, cfg);
    auto integrand = [&](double th) -> double {
        const double s = std::sin(th);
        const double s2 = s * s;
        if (s2 < 1e-280) return 0.0;
        return table_psi(-spec.c / s2);
    };
    QuadResult q = integrate_adaptive(integrand, 0.0, spec.Theta,
                                      opts.quad_abs, opts.quad_rel);
    res.value = q.value / kPi;
    res.diag.quad_error = q.error_estimate / kPi;
    return res;
}

SepResult integral_J_select_all(const IntegralSpec& spec, const JOptions& opts) {
    spec.validate();
    const FasConfig& cfg = spec.cfg;
    if (cfg.K != cfg.N)
        throw std::invalid_argument("integral_J_select_all: requires K == N");
    const double mu = cfg.model.mu;
    const double G = cfg.gamma_av();
    SepResult res;
    res.method = SepMethod::closed_form;
    res.diag.note = "two-pole closed form (K = N)";

    const double sig_big = spec.c * G * (1.0 + (cfg.N - 1) * mu * mu);
    const double sig_small = spec.c * G * (1.0 - mu * mu);
    if (cfg.N == 1) {
        long fb = 0;
        res.value = calG(1, 1.0 / sig_big, spec.Theta, &fb);
        res.diag.kernel_fallbacks = fb;
    } else {
        std::vector<double> sigma{sig_big, sig_small};
        std::vector<int> eta{1, cfg.N - 1};
        PartialFractionCoeffs pf = partial_fraction_coeffs(sigma, eta);
        if (!pf.validated) {
            ++res.diag.pf_failures;
            res.value = calF_numeric(eta, sigma, spec.Theta);
        } else {
            long fb = 0;
            long double sum = 0.0L, amax = 0.0L;
            for (size_t k = 0; k < sigma.size(); ++k) {
                for (int n = 1; n <= eta[k]; ++n) {
                    const long double term =
                        pf.alpha[k][(size_t)n - 1] *
                        (long double)calG(n, 1.0 / sigma[k], spec.Theta, &fb);
                    sum += term;
                    amax = std::max(amax, std::fabs((long double)term));
                }
            }
            res.diag.kernel_fallbacks = fb;
            if (std::fabs((double)sum) < 1e-8 * (double)amax) {
                ++res.diag.kernel_fallbacks;
                res.value = calF_numeric(eta, sigma, spec.Theta);
            } else {
                res.value = (double)sum;
            }
        }
    }
    CfTruncation tr;
    tr.p_max = 0;
    tr.tail_bound = 0.0;
    tr.tol = opts.tol;
    tr.converged = true;
    res.diag.trunc = tr;
    return res;
}

// ---------------------------------------------------------------------------
// SEP front ends
// ---------------------------------------------------------------------------

namespace {

SepResult eval_J_auto(double c, double Theta, const FasConfig& cfg,
                      const SepOptions& opts) {
    IntegralSpec spec{c, Theta, cfg};
    JOptions jo;
    jo.tol = opts.tol;
    jo.mass = opts.mass;
    jo.quad_abs = opts.quad_abs;
    jo.quad_rel = opts.quad_rel;

    using Path = SepOptions::Path;
    if (opts.path == Path::quadrature)
        return integral_J_quadrature(spec, QuadBackend::one_factor, jo);

    if (cfg.K == cfg.N && cfg.model.mu > 1e-8)
        return integral_J_select_all(spec, jo);

    // Cheap feasibility probe before committing to the enumeration: the DP
    // gives the rigorous Psi tail bound at the weakest argument, and the
    // partial sum at theta = Theta/2 bounds J from below.
    bool worth_closed = opts.path == Path::closed;
    if (!worth_closed) {
        CfOptions co;
        co.tol = 0.0;
        co.p_cap = jo.mass.p_cap;
        const double x_weak = -c / theta_sin2_max(Theta);
        const CfValue probe = cf_series(x_weak, cfg, co);
        const double lo = 0.5 * Theta;
        const double hi = std::min(Theta, kHalfPi);
        const double sl = std::sin(lo);
        const CfValue at_lo = cf_series(-c / (sl * sl), cfg, co);
        const double j_lower = std::max(1e-300, (hi - lo) / kPi * at_lo.value);
        const double j_tail = (Theta / kPi) * probe.trunc.tail_bound;
        worth_closed = j_tail <= std::max(1e-14, opts.tol * j_lower);
    }

    if (worth_closed) {
        SepResult closed = integral_J(spec, jo);
        if (opts.path == Path::closed) return closed;
        if (closed.diag.trunc && closed.diag.trunc->converged) return closed;
    }

    SepResult q = integral_J_quadrature(spec, QuadBackend::one_factor, jo);
    q.diag.note = "series truncation uncertified; one-factor quadrature";
    return q;
}

SepResult finalize(SepResult r) {
    r.value = std::clamp(r.value, 0.0, 1.0);
    return r;
}

void check_order(int M, int lo, const char* what) {
    if (M < lo) throw std::invalid_argument(std::string(what) + ": invalid order M");
}

} // namespace

SepResult sep_ask(int M, const FasConfig& cfg, const SepOptions& opts) {
    check_order(M, 2, "sep_ask");
    if (opts.path == SepOptions::Path::asymptotic)
        return sep_asymptotic(Modulation::ask, M, cfg);
    const double c = 3.0 / ((double)M * M - 1.0);
    SepResult r = eval_J_auto(c, kHalfPi, cfg, opts);
    r.value *= 2.0 * (M - 1) / (double)M;
    return finalize(r);
}

SepResult sep_psk(int M, const FasConfig& cfg, const SepOptions& opts) {
    check_order(M, 2, "sep_psk");
    if (opts.path == SepOptions::Path::asymptotic)
        return sep_asymptotic(Modulation::psk, M, cfg);
    const double sp = std::sin(kPi / M);
    SepResult r = eval_J_auto(sp * sp, kPi * (M - 1) / (double)M, cfg, opts);
    return finalize(r);
}

SepResult sep_qam(int M, const FasConfig& cfg, const SepOptions& opts) {
    check_order(M, 4, "sep_qam");
    const int rt = (int)std::llround(std::sqrt((double)M));
    if (rt * rt != M)
        throw std::invalid_argument("sep_qam: M must be a perfect square");
    if (opts.path == SepOptions::Path::asymptotic)
        return sep_asymptotic(Modulation::qam, M, cfg);
    const double c = 3.0 / (2.0 * (M - 1));
    const double v = 1.0 - 1.0 / (double)rt;
    SepResult r1 = eval_J_auto(c, kHalfPi, cfg, opts);
    SepResult r2 = eval_J_auto(c, 0.25 * kPi, cfg, opts);
    SepResult r = r1;
    r.value = 4.0 * v * r1.value - 4.0 * v * v * r2.value;
    if (r2.method == SepMethod::quadrature) r.method = r2.method;
    r.diag.kernel_fallbacks += r2.diag.kernel_fallbacks;
    r.diag.pf_failures += r2.diag.pf_failures;
    if (r2.diag.quad_error)
        r.diag.quad_error = r.diag.quad_error.value_or(0.0) + *r2.diag.quad_error;
    return finalize(r);
}

SepResult sep_bfsk(const FasConfig& cfg, const SepOptions& opts) {
    if (opts.path == SepOptions::Path::asymptotic)
        return sep_asymptotic(Modulation::bfsk, 2, cfg);
    SepResult r = eval_J_auto(0.5, kHalfPi, cfg, opts);
    return finalize(r);
}

SepResult sep(Modulation mod, int M, const FasConfig& cfg, const SepOptions& opts) {
    switch (mod) {
        case Modulation::ask: return sep_ask(M, cfg, opts);
        case Modulation::psk: return sep_psk(M, cfg, opts);
        case Modulation::qam: return sep_qam(M, cfg, opts);
        case Modulation::bfsk:
            if (M != 2) throw std::invalid_argument("BFSK requires M = 2");
            return sep_bfsk(cfg, opts);
    }
    throw std::invalid_argument("sep: unknown modulation");
}

// ---------------------------------------------------------------------------
// asymptotics
// ---------------------------------------------------------------------------

double calK(const FasConfig& cfg) {
    cfg.validate();
    const double mu = cfg.model.mu;
    const int N = cfg.N, K = cfg.K;
    const int Nt = N - K + 1;
    return (1.0 + (N - 1) * mu * mu) * std::exp(std::lgamma((double)K)) *
           std::pow((double)K, (double)Nt) *
           std::pow(1.0 - mu * mu, (double)(N - 1));
}

SepResult sep_asymptotic(Modulation mod, int M, const FasConfig& cfg) {
    cfg.validate();
    const int N = cfg.N;
    const double G = cfg.gamma_av();
    const double lgK = std::log(calK(cfg));
    const double lgGN = N * std::log(G);
    double lg;
    switch (mod) {
        case Modulation::ask: {
            check_order(M, 2, "sep_asymptotic(ask)");
            lg = (N + 1) * std::log((double)M - 1.0) + N * std::log((double)M + 1.0) +
                 std::lgamma(2.0 * N + 1.0) - 2.0 * N * std::log(2.0) -
                 N * std::log(3.0) - std::log((double)M) - std::lgamma(N + 1.0) -
                 lgK - lgGN;
            break;
        }
        case Modulation::psk: {
            check_order(M, 2, "sep_asymptotic(psk)");
            const double sp = std::sin(kPi / M);
            const double I = specfun::sin_power_integral(N, kPi * (M - 1) / (double)M);
            lg = std::lgamma(N + 1.0) + std::log(I) - std::log(kPi) -
                 2.0 * N * std::log(sp) - lgK - lgGN;
            break;
        }
        case Modulation::qam: {
            check_order(M, 4, "sep_asymptotic(qam)");
            const int rt = (int)std::llround(std::sqrt((double)M));
            if (rt * rt != M)
                throw std::invalid_argument("sep_asymptotic: M must be a perfect square");
            const double v = 1.0 - 1.0 / (double)rt;
            const double full = kPi * std::exp(std::lgamma(2.0 * N + 1.0) -
                                               2.0 * N * std::log(2.0) -
                                               2.0 * std::lgamma(N + 1.0));
            const double bracket =
                full - v * specfun::incomplete_beta_half(N + 0.5, 0.5);
            lg = std::log(v) + (N + 1) * std::log(2.0) + N * std::log((double)M - 1.0) +
                 std::lgamma(N + 1.0) - std::log(kPi) - N * std::log(3.0) - lgK -
                 lgGN + std::log(bracket);
            break;
        }
        case Modulation::bfsk: {
            lg = std::lgamma(2.0 * N + 1.0) - (N + 1) * std::log(2.0) -
                 std::lgamma(N + 1.0) - lgK - lgGN;
            break;
        }
        default:
            throw std::invalid_argument("sep_asymptotic: unknown modulation");
    }
    SepResult r;
    r.method = SepMethod::asymptotic;
    r.value = std::exp(lg);
    return r;
}

} // namespace fas
