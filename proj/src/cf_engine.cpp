#include "fas/cf_engine.hpp"
#include "fas/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace fas {

void FasConfig::validate() const {
    if (N < 1) throw std::invalid_argument("FasConfig: N must be >= 1");
    if (K < 1 || K > N) throw std::invalid_argument("FasConfig: need 1 <= K <= N");
    if (!(model.mu >= 0.0) || model.mu >= 1.0)
        throw std::invalid_argument("FasConfig: mu must lie in [0, 1)");
    if (!(E_av > 0.0)) throw std::invalid_argument("FasConfig: E_av must be > 0");
    if (!(sigma_n2 > 0.0)) throw std::invalid_argument("FasConfig: sigma_n2 must be > 0");
}

FasConfig FasConfig::make(int N, int K, CorrelationModel model, double gamma_av) {
    if (!(gamma_av > 0.0))
        throw std::invalid_argument("FasConfig: gamma_av must be > 0");
    FasConfig cfg;
    cfg.N = N;
    cfg.K = K;
    cfg.model = model;
    cfg.sigma_n2 = 1.0;
    cfg.E_av = gamma_av / model.sigma_h2;
    cfg.validate();
    return cfg;
}

namespace {

struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
        size_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= (size_t)(x + 0x9e37);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// dense Pascal table, C(a, b) for a <= amax
struct BinTable {
    int amax;
    std::vector<double> c;
    explicit BinTable(int amax_)
        : amax(amax_), c((size_t)(amax_ + 1) * (amax_ + 1), 0.0) {
        for (int a = 0; a <= amax; ++a) {
            at(a, 0) = 1.0;
            for (int b = 1; b <= a; ++b)
                at(a, b) = at(a - 1, b - 1) + (b <= a - 1 ? at(a - 1, b) : 0.0);
        }
    }
    double& at(int a, int b) { return c[(size_t)a * (amax + 1) + b]; }
    double get(int a, int b) const {
        if (b < 0 || a < 0 || b > a) return 0.0;
        return c[(size_t)a * (amax + 1) + b];
    }
};

double series_prefactor(int N, double mu) {
    return (1.0 - mu * mu) / (1.0 + (N - 1) * mu * mu);
}

double series_ratio(int N, double mu) {
    return (mu * mu) / (1.0 + (N - 1) * mu * mu);
}

double apriori_tail_generic(int N, double mu, int p) {
    const double rho_s = (double)N * mu * mu / (1.0 + (N - 1) * mu * mu);
    if (rho_s <= 0.0) return 0.0;
    if (rho_s >= 1.0) return 1.0;
    return std::pow(rho_s, p + 1) * specfun::binomial(p + N, N - 1) /
           (1.0 - rho_s);
}

} // namespace

double MassTable::apriori_tail(int p) const {
    return apriori_tail_generic(N, mu, p);
}

MassTable build_mass_table(int N, int K, double mu, const MassTableOptions& opts) {
    if (N < 1 || K < 1 || K > N)
        throw std::invalid_argument("build_mass_table: need 1 <= K <= N");
    MassTable table;
    table.N = N;
    table.K = K;
    table.mu = mu;

    const double A = series_prefactor(N, mu);
    const double rho = series_ratio(N, mu);
    const int p_cap = std::max(0, opts.p_cap);
    BinTable bins(2 * p_cap + 2);

    // inv_kq[k][q] = (k+1)^(-q), 0-based k; the k = 0 column is all ones
    std::vector<std::vector<double>> inv_kq((size_t)N);
    for (int k = 0; k < N; ++k) {
        inv_kq[(size_t)k].assign((size_t)p_cap + 1, 1.0);
        for (int q = 1; q <= p_cap; ++q)
            inv_kq[(size_t)k][(size_t)q] =
                inv_kq[(size_t)k][(size_t)q - 1] / (double)(k + 1);
    }

    std::unordered_map<std::vector<int>, double, VecHash> global;
    std::vector<int> l((size_t)N), eta((size_t)(N - K + 1), 1);
    long pairs_total = 0;
    double included_mass = 0.0;

    for (int p = 0; p <= p_cap; ++p) {
        std::unordered_map<std::vector<int>, double, VecHash> level;
        long level_pairs = 0;
        bool aborted = false;

        // q-descent nested inside the l-composition descent; weights are
        // accumulated incrementally so each leaf costs O(1)
        auto qrec = [&](auto&& self, int k, int qpref, int lpref, int D, int s,
                        double w) -> void {
            if (aborted) return;
            if (k == N - 1) {
                const int qlast = p - qpref;
                if (qlast < 0) return;
                double wl = w * bins.get(l[(size_t)k] + D, l[(size_t)k]);
                if (N >= 2) wl *= inv_kq[(size_t)k][(size_t)qlast];
                if (K == N) {
                    eta[0] = K + s + qlast;
                } else {
                    eta[0] = K + s;
                    eta[(size_t)(N - 1 - K + 1)] = qlast + 1;
                }
                level[eta] += wl;
                if (++level_pairs + pairs_total > opts.pair_budget) aborted = true;
                return;
            }
            const int nlpref = lpref + l[(size_t)k];
            const int hi = std::min(nlpref - qpref, p - qpref);
            const double wk = w * bins.get(l[(size_t)k] + D, l[(size_t)k]);
            for (int q = 0; q <= hi; ++q) {
                if (k >= K) eta[(size_t)(k - K + 1)] = q + 1;
                self(self, k + 1, qpref + q, nlpref, D + l[(size_t)k] - q,
                     k < K ? s + q : s,
                     k >= 1 ? wk * inv_kq[(size_t)k][(size_t)q] : wk);
            }
        };

        // multinomial chain prod_k C(L_k, l_k) over the prefix sums L_k
        auto lrec = [&](auto&& self, int pos, int rem, double mult) -> void {
            if (aborted) return;
            if (pos == N - 1) {
                l[(size_t)pos] = rem;
                qrec(qrec, 0, 0, 0, 0, 0, mult * bins.get(p, rem));
                return;
            }
            const int placed = p - rem;
            for (int v = rem; v >= 0; --v) {
                l[(size_t)pos] = v;
                self(self, pos + 1, rem - v, mult * bins.get(placed + v, v));
            }
        };

        if (N == 1) {
            l[0] = p;
            qrec(qrec, 0, 0, 0, 0, 0, 1.0);
        } else {
            lrec(lrec, 0, p, 1.0);
        }

        if (aborted) {
            table.budget_exhausted = true;
            break; // the partial level is discarded
        }

        const double scale = A * std::pow(rho, p);
        double level_sum = 0.0, comp = 0.0;
        std::map<std::vector<int>, double> ordered(level.begin(), level.end());
        for (const auto& [key, w] : ordered) {
            const double m = scale * w;
            global[key] += m;
            const double y = m - comp;
            const double t = level_sum + y;
            comp = (t - level_sum) - y;
            level_sum = t;
        }
        table.level_mass.push_back(level_sum);
        included_mass += level_sum;
        pairs_total += level_pairs;
        table.p_reached = p;

        if (rho == 0.0) break; // mu = 0: the p = 0 term is exact
        const double deficit = std::max(0.0, 1.0 - included_mass);
        if (std::min(deficit, apriori_tail_generic(N, mu, p)) <= opts.tol &&
            level_sum <= opts.tol / 10.0)
            break;
    }

    table.pairs = pairs_total;
    table.deficit = std::max(0.0, 1.0 - included_mass);
    table.entries.reserve(global.size());
    std::map<std::vector<int>, double> ordered(global.begin(), global.end());
    for (auto& [key, m] : ordered) table.entries.push_back({key, m});
    return table;
}

double cf_pole_product(double x, const std::vector<int>& eta, const FasConfig& cfg) {
    if (x > 0) throw std::invalid_argument("cf_pole_product: x must be <= 0");
    const double beta = 1.0 - cfg.model.mu * cfg.model.mu;
    const double G = cfg.gamma_av();
    double prod = 1.0;
    for (size_t j = 0; j < eta.size(); ++j) {
        const double scale = beta * cfg.K * G / (double)(cfg.K + (int)j);
        prod *= std::pow(1.0 - x * scale, -(double)eta[j]);
    }
    return prod;
}

double pole_damping(double x, const FasConfig& cfg, int n) {
    if (x >= 0) return 1.0;
    const double beta = 1.0 - cfg.model.mu * cfg.model.mu;
    const double G = cfg.gamma_av();
    double scale = beta * G;
    if (cfg.K < cfg.N)
        scale = std::min(scale, beta * cfg.K * G / (double)cfg.N);
    return std::pow(1.0 / (1.0 - x * scale), n);
}

double cf_from_table(double x, const MassTable& table, const FasConfig& cfg) {
    double sum = 0.0, comp = 0.0;
    for (const auto& e : table.entries) {
        const double v = e.mass * cf_pole_product(x, e.eta, cfg);
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

namespace {

// ---------------------------------------------------------------------------
// Dynamic program over (L, Q) prefix-sum states. Stage k adds increments
// (l_k = L - L', q_k = Q - Q') with weight
//   C(L, L') * C(L - Q', L - L') * rho^(L - L') * phi_k^(Q - Q'),
// reproducing the enumerated multinomial/interleaving weights exactly; the
// order-p series term is read off the diagonal L = Q = p after stage N.
// Intermediate states keep Q <= L (the prefix-domination constraint).
// ---------------------------------------------------------------------------
std::vector<double> dp_series_terms(double x, const FasConfig& cfg, int P,
                                    const BinTable& bins) {
    const int N = cfg.N, K = cfg.K;
    const double mu = cfg.model.mu;
    const double beta = 1.0 - mu * mu;
    const double G = cfg.gamma_av();
    const double A = series_prefactor(N, mu);
    const double rho = series_ratio(N, mu);

    std::vector<double> rho_pow((size_t)P + 1);
    rho_pow[0] = 1.0;
    for (int i = 1; i <= P; ++i) rho_pow[(size_t)i] = rho_pow[(size_t)i - 1] * rho;

    const double f1 = 1.0 / (1.0 - x * beta * G);

    const size_t W = (size_t)P + 1;
    std::vector<double> cur(W * W, 0.0), nxt(W * W, 0.0);
    cur[0] = 1.0;
    double prefactor = 1.0;
    std::vector<double> phi_pow(W);

    for (int k = 1; k <= N; ++k) {
        const double base = (k <= K) ? f1 : 1.0 / (1.0 - x * beta * K * G / (double)k);
        prefactor *= base;
        const double phi = (k == 1) ? base : base / (double)k;
        phi_pow[0] = 1.0;
        for (int i = 1; i <= P; ++i) phi_pow[(size_t)i] = phi_pow[(size_t)i - 1] * phi;

        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int Lp = 0; Lp <= P; ++Lp) {
            for (int Qp = 0; Qp <= Lp; ++Qp) {
                const double amp = cur[(size_t)Lp * W + Qp];
                if (amp == 0.0) continue;
                for (int L = Lp; L <= P; ++L) {
                    const double wl = amp * bins.get(L, Lp) *
                                      bins.get(L - Qp, L - Lp) *
                                      rho_pow[(size_t)(L - Lp)];
                    if (wl == 0.0) continue;
                    double* row = &nxt[(size_t)L * W];
                    for (int Q = Qp; Q <= L; ++Q)
                        row[Q] += wl * phi_pow[(size_t)(Q - Qp)];
                }
            }
        }
        cur.swap(nxt);
    }

    std::vector<double> terms((size_t)P + 1);
    for (int p = 0; p <= P; ++p)
        terms[(size_t)p] = A * prefactor * cur[(size_t)p * W + p];
    return terms;
}

} // namespace

CfValue cf_series(double x, const FasConfig& cfg, const CfOptions& opts) {
    cfg.validate();
    if (x > 0) throw std::invalid_argument("cf_series: x must be <= 0");
    CfValue out;
    out.trunc.tol = opts.tol;
    if (x == 0.0) {
        out.value = 1.0;
        out.trunc = {0, 0.0, opts.tol, true};
        return out;
    }
    const int P = std::max(0, opts.p_cap);
    BinTable bins(2 * P + 2);
    const std::vector<double> terms = dp_series_terms(x, cfg, P, bins);
    const std::vector<double> masses = dp_series_terms(0.0, cfg, P, bins);

    double value = 0.0, comp = 0.0, mass_acc = 0.0;
    for (int p = 0; p <= P; ++p) {
        const double y = terms[(size_t)p] - comp;
        const double t = value + y;
        comp = (t - value) - y;
        value = t;
        mass_acc += masses[(size_t)p];

        const double deficit = std::max(0.0, 1.0 - mass_acc);
        const double bound =
            std::min(deficit * pole_damping(x, cfg, cfg.N + p + 1),
                     apriori_tail_generic(cfg.N, cfg.model.mu, p));
        if (bound <= opts.tol && terms[(size_t)p] < opts.tol / 10.0) {
            out.value = value;
            out.trunc = {p, bound, opts.tol, true};
            return out;
        }
    }
    const double deficit = std::max(0.0, 1.0 - mass_acc);
    const double bound =
        std::min(deficit * pole_damping(x, cfg, cfg.N + P + 1),
                 apriori_tail_generic(cfg.N, cfg.model.mu, P));
    out.value = value;
    out.trunc = {P, bound, opts.tol, bound <= opts.tol};
    return out;
}

std::pair<double, CfTruncation> cf_value(double x, const FasConfig& cfg,
                                         double tol, int p_cap) {
    CfOptions opts;
    opts.tol = tol;
    opts.p_cap = p_cap;
    CfValue v = cf_series(x, cfg, opts);
    if (!v.trunc.converged)
        throw truncation_error("cf_value: series tolerance unreachable within p cap",
                               v.value, v.trunc);
    return {v.value, v.trunc};
}

double cf_value_iid(double x, const FasConfig& cfg) {
    const double G = cfg.gamma_av();
    double v = std::pow(1.0 - x * G, -(double)cfg.K);
    for (int k = cfg.K + 1; k <= cfg.N; ++k)
        v /= 1.0 - x * cfg.K * G / (double)k;
    return v;
}

double cf_value_select_all(double x, const FasConfig& cfg) {
    const double mu = cfg.model.mu;
    const double G = cfg.gamma_av();
    const double big = 1.0 + (cfg.N - 1) * mu * mu;
    return 1.0 / (1.0 - x * G * big) *
           std::pow(1.0 - x * G * (1.0 - mu * mu), -(double)(cfg.N - 1));
}

} // namespace fas
