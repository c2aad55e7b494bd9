#include "fas/cf_onefactor.hpp"
#include "fas/quadrature.hpp"
#include "fas/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace fas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kChebMax = 17;

// exponentially scaled I0: I0(z) * exp(-z), z >= 0
double besseli0_scaled(double z) {
    if (z < 18.0) {
        const double q = 0.25 * z * z;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / ((double)k * k);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return sum * std::exp(-z);
    }
    double t = 1.0, sum = 1.0;
    for (int k = 1; k < 25; ++k) {
        const double nt = t * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
        if (nt >= t && k > 2) break;
        t = nt;
        sum += t;
        if (t < 1e-17) break;
    }
    return sum / std::sqrt(2.0 * kPi * z);
}

// ---- small Chebyshev toolkit (Lobatto nodes, ascending order) ----

struct ChebBasis {
    int n = 0; // node count
    double t[kChebMax];
    double cosjk[kChebMax * kChebMax]; // cos(pi k (n-1-j) / (n-1))

    explicit ChebBasis(int nodes) : n(nodes) {
        for (int j = 0; j < n; ++j)
            t[j] = -std::cos(kPi * (double)j / (n - 1));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                cosjk[k * n + j] = std::cos(kPi * k * (double)(n - 1 - j) / (n - 1));
    }

    void coeffs(const double* v, double* c) const {
        const int m = n - 1;
        for (int k = 0; k <= m; ++k) {
            double s = 0.0;
            const double* row = &cosjk[k * n];
            for (int j = 0; j <= m; ++j) {
                const double w = (j == 0 || j == m) ? 0.5 : 1.0;
                s += w * v[j] * row[j];
            }
            s *= 2.0 / m;
            c[k] = (k == 0 || k == m) ? 0.5 * s : s;
        }
    }

    // antiderivative coefficients (one extra coefficient)
    void antideriv(const double* c, double* b) const {
        const int m = n - 1;
        for (int k = 1; k <= m + 1; ++k) {
            const double cm = (k == 1) ? 2.0 * c[0] : c[k - 1];
            const double cp = (k + 1 <= m) ? c[k + 1] : 0.0;
            b[k] = (cm - cp) / (2.0 * k);
        }
        b[0] = 0.0;
    }

    static double eval(const double* c, int nc, double t) {
        double b1 = 0.0, b2 = 0.0;
        for (int k = nc; k >= 1; --k) {
            const double b0 = 2.0 * t * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return t * b1 - b2 + c[0];
    }
};

// cumulative integrals of a sampled panel: from the left and from the right
struct PanelCum {
    double from_left[kChebMax];
    double from_right[kChebMax];
    double total = 0.0;
};

void panel_cumulate(const ChebBasis& B, const double* v, double half, PanelCum& out) {
    double c[kChebMax], b[kChebMax + 1];
    B.coeffs(v, c);
    B.antideriv(c, b);
    const double bl = ChebBasis::eval(b, B.n, -1.0);
    const double br = ChebBasis::eval(b, B.n, 1.0);
    for (int j = 0; j < B.n; ++j) {
        const double bj = ChebBasis::eval(b, B.n, B.t[j]);
        out.from_left[j] = (bj - bl) * half;
        out.from_right[j] = (br - bj) * half;
    }
    out.total = (br - bl) * half;
}

double panel_integral(const ChebBasis& B, const double* v, double half) {
    double c[kChebMax], b[kChebMax + 1];
    B.coeffs(v, c);
    B.antideriv(c, b);
    return (ChebBasis::eval(b, B.n, 1.0) - ChebBasis::eval(b, B.n, -1.0)) * half;
}

// ---- per-slice state: everything that depends on (mu, g) but not on theta ----

struct GSlice {
    double m = 0.0, rm = 0.0, beta = 0.0;
    std::vector<double> knots;   // r-panel boundaries, ascending
    std::vector<double> r;       // node radii (npan * n)
    std::vector<double> i0s;     // scaled Bessel at nodes
    std::vector<double> vF;      // density of the per-port power in r
    std::vector<PanelCum> cumF;  // per panel
    std::vector<double> Fpre;    // prefix of F at panel starts
};

// r-panel layout: a ladder across the Rice bulk plus geometric panels
// toward r = 0 so boundary layers at any tilt strength stay resolved.
std::vector<double> make_knots(double rm, double w0, double ladder_step) {
    const double rhi = rm + 12.0 * w0;
    std::vector<double> ks;
    for (double r = rm - 12.0 * w0; r < rhi - 1e-300; r += ladder_step * w0)
        if (r > 0.0) ks.push_back(r);
    ks.push_back(rhi);
    double lo = ks.empty() ? rhi : ks.front();
    for (double r = 0.5 * lo; r > 1e-9 * w0; r *= 0.5) ks.push_back(r);
    ks.push_back(0.0);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

void build_slice(GSlice& S, const ChebBasis& B, double mu, double g,
                 double ladder_step) {
    S.beta = 1.0 - mu * mu;
    S.m = mu * mu * g;
    S.rm = std::sqrt(S.m);
    const double w0 = std::sqrt(0.5 * S.beta);
    S.knots = make_knots(S.rm, w0, ladder_step);
    const int npan = (int)S.knots.size() - 1;
    const int n = B.n;
    S.r.resize((size_t)npan * n);
    S.i0s.resize(S.r.size());
    S.vF.resize(S.r.size());
    S.cumF.assign((size_t)npan, {});
    S.Fpre.assign((size_t)npan + 1, 0.0);
    for (int p = 0; p < npan; ++p) {
        const double half = 0.5 * (S.knots[(size_t)p + 1] - S.knots[(size_t)p]);
        const double mid = 0.5 * (S.knots[(size_t)p + 1] + S.knots[(size_t)p]);
        for (int j = 0; j < n; ++j) {
            const double r = mid + half * B.t[j];
            const size_t idx = (size_t)p * n + j;
            S.r[idx] = r;
            S.i0s[idx] = besseli0_scaled(2.0 * S.rm * r / S.beta);
            const double dr = r - S.rm;
            S.vF[idx] =
                (2.0 * r / S.beta) * std::exp(-dr * dr / S.beta) * S.i0s[idx];
        }
        panel_cumulate(B, &S.vF[(size_t)p * n], half, S.cumF[(size_t)p]);
        S.Fpre[(size_t)p + 1] = S.Fpre[(size_t)p] + S.cumF[(size_t)p].total;
    }
}

// conditional order-statistics integral for tilt a (= x Gamma), given slice
double slice_mgf(const GSlice& S, const ChebBasis& B, double a, int N, int K) {
    const double beta = S.beta;
    const double s = 1.0 - a * beta;
    const double e1 = std::exp(-(S.m / beta) * (1.0 - 1.0 / s));
    if (e1 == 0.0) return 0.0;
    const double rs = S.rm / s;
    const double L = std::sqrt(45.0 * beta / s); // active window half-width
    const int npan = (int)S.knots.size() - 1;
    const int n = B.n;

    // pass 1: tilted density, cumulated from the right
    static thread_local std::vector<double> vG;
    static thread_local std::vector<PanelCum> cumG;
    static thread_local std::vector<char> active;
    vG.assign((size_t)npan * n, 0.0);
    cumG.assign((size_t)npan, {});
    active.assign((size_t)npan, 0);

    for (int p = 0; p < npan; ++p) {
        const double x0 = S.knots[(size_t)p], x1 = S.knots[(size_t)p + 1];
        if (x1 < rs - L || x0 > rs + L) continue;
        active[(size_t)p] = 1;
        const double half = 0.5 * (x1 - x0);
        for (int j = 0; j < n; ++j) {
            const size_t idx = (size_t)p * n + j;
            const double dr = S.r[idx] - rs;
            vG[idx] = (2.0 * S.r[idx] / beta) *
                      std::exp(-s * dr * dr / beta) * S.i0s[idx] * e1;
        }
        panel_cumulate(B, &vG[(size_t)p * n], half, cumG[(size_t)p]);
    }
    std::vector<double> Gsuf((size_t)npan + 1, 0.0);
    for (int p = npan - 1; p >= 0; --p)
        Gsuf[(size_t)p] = Gsuf[(size_t)p + 1] + cumG[(size_t)p].total;

    // pass 2: f_tilt * F^(N-K) * G^(K-1)
    double total = 0.0;
    double out[kChebMax];
    for (int p = 0; p < npan; ++p) {
        if (!active[(size_t)p]) continue;
        const double half = 0.5 * (S.knots[(size_t)p + 1] - S.knots[(size_t)p]);
        for (int j = 0; j < n; ++j) {
            const size_t idx = (size_t)p * n + j;
            const double F =
                std::min(1.0, S.Fpre[(size_t)p] + S.cumF[(size_t)p].from_left[j]);
            const double G = Gsuf[(size_t)p + 1] + cumG[(size_t)p].from_right[j];
            double v = vG[idx];
            for (int e = 0; e < N - K; ++e) v *= F;
            for (int e = 0; e < K - 1; ++e) v *= G;
            out[j] = v;
        }
        total += panel_integral(B, out, half);
    }
    const double cNK = (double)N * specfun::binomial(N - 1, K - 1);
    return cNK * total;
}

struct GridSpec {
    int cheb = 13;
    double ladder_step = 1.5;
    int g_per_panel = 8;      // Gauss-Legendre nodes per g-panel
    int g_split = 1;          // extra subdivision of every g-panel
    int theta_geo = 10;       // geometric theta panels
    double theta_ratio = 0.55;
    int theta_per_panel = 8;
};

// Gauss-Legendre nodes/weights on [-1,1] (computed once per order by Newton)
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize((size_t)n);
    w.resize((size_t)n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1.0);
        x[(size_t)i] = t;
        w[(size_t)i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

// graded g-panels; the first ones resolve decay rates up to mu^2/(1-mu^2)
const double kGPanels[] = {0.0,  0.02, 0.06, 0.15, 0.35, 0.7, 1.2, 2.0, 3.0,
                           4.5,  6.5,  9.0,  12.5, 17.0, 23.0, 30.0, 38.0, 46.0};

double j_onefactor_grid(double c, double Theta, const FasConfig& cfg,
                        const GridSpec& grid) {
    const double mu = cfg.model.mu;
    const double G = cfg.gamma_av();
    const ChebBasis B(grid.cheb);

    std::vector<double> gx, gw;
    gauss_legendre(grid.g_per_panel, gx, gw);
    std::vector<double> tx, tw;
    gauss_legendre(grid.theta_per_panel, tx, tw);

    // theta panels: geometric toward 0, where the integrand vanishes
    std::vector<double> tknots{Theta};
    double edge = Theta;
    for (int i = 0; i < grid.theta_geo; ++i) {
        edge *= grid.theta_ratio;
        tknots.push_back(edge);
    }
    tknots.push_back(0.0);
    std::sort(tknots.begin(), tknots.end());

    auto theta_integral = [&](const GSlice& S) {
        double acc = 0.0;
        for (size_t tp = 0; tp + 1 < tknots.size(); ++tp) {
            const double th0 = tknots[tp], th1 = tknots[tp + 1];
            const double hh = 0.5 * (th1 - th0), hm = 0.5 * (th1 + th0);
            for (int ti = 0; ti < grid.theta_per_panel; ++ti) {
                const double th = hm + hh * tx[(size_t)ti];
                const double s2 = std::sin(th) * std::sin(th);
                if (s2 < 1e-290) continue;
                const double a = -c * G / s2;
                acc += hh * tw[(size_t)ti] * slice_mgf(S, B, a, cfg.N, cfg.K);
            }
        }
        return acc / kPi;
    };

    double total = 0.0;
    GSlice S;
    for (size_t gp = 0; gp + 1 < std::size(kGPanels); ++gp) {
        double panel_total = 0.0;
        for (int sub = 0; sub < grid.g_split; ++sub) {
            const double w = (kGPanels[gp + 1] - kGPanels[gp]) / grid.g_split;
            const double g0 = kGPanels[gp] + sub * w;
            const double gh = 0.5 * w, gm = g0 + gh;
            for (int ui = 0; ui < grid.g_per_panel; ++ui) {
                const double g = gm + gh * gx[(size_t)ui];
                build_slice(S, B, mu, g, grid.ladder_step);
                panel_total +=
                    gh * gw[(size_t)ui] * std::exp(-g) * theta_integral(S);
            }
        }
        total += panel_total;
        // the integrand decays in g; skip the far tail once it is negligible
        if (gp > 4 && std::fabs(panel_total) < 1e-16 * std::fabs(total)) break;
    }
    return total;
}

} // namespace

double cf_value_onefactor(double x, const FasConfig& cfg, const OneFactorOptions& opts) {
    cfg.validate();
    if (x > 0) throw std::invalid_argument("cf_value_onefactor: x must be <= 0");
    if (x == 0.0) return 1.0;
    const double mu = cfg.model.mu;
    if (mu == 0.0) return cf_value_iid(x, cfg);
    const double a = x * cfg.gamma_av();

    const ChebBasis B(kChebMax);
    GSlice S;
    auto integrand = [&](double g) {
        if (g <= 0.0) g = 1e-14;
        build_slice(S, B, mu, g, 1.0);
        return std::exp(-g) * slice_mgf(S, B, a, cfg.N, cfg.K);
    };
    QuadResult q = integrate_adaptive(integrand, 0.0, 45.0, 0.5 * opts.tol,
                                      0.25 * opts.tol, 40);
    return std::min(1.0, std::max(0.0, q.value));
}

OneFactorJResult integral_J_onefactor(double c, double Theta, const FasConfig& cfg,
                                      double rel_tol, double abs_tol) {
    cfg.validate();
    if (!(c > 0.0) || !(Theta > 0.0) || !(Theta < kPi))
        throw std::invalid_argument("integral_J_onefactor: bad (c, Theta)");
    if (cfg.model.mu == 0.0) {
        // iid case: integrate the product-form cf directly
        auto f = [&](double th) {
            const double s2 = std::sin(th) * std::sin(th);
            if (s2 < 1e-290) return 0.0;
            return cf_value_iid(-c / s2, cfg);
        };
        QuadResult q = integrate_adaptive(f, 0.0, Theta, abs_tol, rel_tol * 0.1);
        return {q.value / kPi, q.error_estimate / kPi};
    }

    GridSpec g1; // base grid
    GridSpec g2; // refined grid, panels split so errors decorrelate
    g2.cheb = 17;
    g2.ladder_step = 1.0;
    g2.g_per_panel = 10;
    g2.g_split = 2;
    g2.theta_geo = 14;
    g2.theta_ratio = 0.62;
    g2.theta_per_panel = 12;

    const double v1 = j_onefactor_grid(c, Theta, cfg, g1);
    const double v2 = j_onefactor_grid(c, Theta, cfg, g2);
    double err = std::fabs(v2 - v1);
    if (err <= std::max(abs_tol, rel_tol * std::fabs(v2)))
        return {v2, err};

    GridSpec g3 = g2; // one more notch
    g3.ladder_step = 0.75;
    g3.g_per_panel = 12;
    g3.g_split = 3;
    g3.theta_geo = 18;
    g3.theta_ratio = 0.7;
    g3.theta_per_panel = 16;
    const double v3 = j_onefactor_grid(c, Theta, cfg, g3);
    return {v3, std::fabs(v3 - v2)};
}

} // namespace fas
