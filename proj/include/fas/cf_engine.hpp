#pragma once

#include "fas/correlation.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace fas {

// System configuration; gamma_av = E_av * sigma_h2 / sigma_n2 is the single
// SNR quantity every formula depends on.
struct FasConfig {
    int N = 1;
    int K = 1;
    CorrelationModel model;
    double E_av = 1.0;
    double sigma_n2 = 1.0;

    double gamma_av() const { return E_av * model.sigma_h2 / sigma_n2; }
    void validate() const;

    static FasConfig make(int N, int K, CorrelationModel model, double gamma_av);
};

struct CfTruncation {
    int p_max = 0;           // highest series order included
    double tail_bound = 0.0; // rigorous bound on the discarded remainder
    double tol = 0.0;
    bool converged = false;
};

class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, double partial, CfTruncation trunc)
        : std::runtime_error(what), partial_value(partial), truncation(trunc) {}
    double partial_value;
    CfTruncation truncation;
};

// ---------------------------------------------------------------------------
// Aggregated signature masses.
//
// Every (l, q) term of the double series contributes to one pole signature
// eta = (K + sum_{k<=K} q_k, q_{K+1}+1, ..., q_N+1); the scalar weight mass
// (including the series prefactor and rho^p) is accumulated per signature so
// each expensive integral kernel is evaluated once per signature.
// ---------------------------------------------------------------------------
struct SigEntry {
    std::vector<int> eta;
    double mass = 0.0;
};

struct MassTableOptions {
    int p_cap = 40;              // hard cap on the series order
    long pair_budget = 5000000;  // max enumerated (l, q) pairs
    double tol = 1e-10;          // stop early once the tail bound drops below
};

struct MassTable {
    int N = 0, K = 0;
    double mu = 0.0;
    int p_reached = -1;              // complete p-levels included
    double deficit = 1.0;            // 1 - total included mass (exact tail mass)
    long pairs = 0;                  // enumerated (l, q) terms
    bool budget_exhausted = false;
    std::vector<SigEntry> entries;   // sorted by eta; deterministic
    std::vector<double> level_mass;  // mass per series order p

    // Spec a-priori geometric-polynomial bound on the tail past order p.
    double apriori_tail(int p) const;
};

MassTable build_mass_table(int N, int K, double mu, const MassTableOptions& opts = {});

// Pole-factor product for one aggregated signature at real x <= 0
// (the denominator of one series term with the k <= K pole merged).
double cf_pole_product(double x, const std::vector<int>& eta, const FasConfig& cfg);

// Largest single pole factor at x (< 1 for x < 0); powers it by n.
double pole_damping(double x, const FasConfig& cfg, int n);

// Psi evaluated from a mass table (same truncation as the table).
double cf_from_table(double x, const MassTable& table, const FasConfig& cfg);

// ---------------------------------------------------------------------------
// Truncated series evaluated pointwise by a dynamic program over prefix sums
// (identical sum as enumerating (l, q) pairs, at polynomial cost).
// ---------------------------------------------------------------------------
struct CfOptions {
    double tol = 1e-10;
    int p_cap = 40;
};

struct CfValue {
    double value = 0.0;
    CfTruncation trunc;
};

// No-throw evaluation; trunc.converged reports certification.
CfValue cf_series(double x, const FasConfig& cfg, const CfOptions& opts = {});

// Contract operation: throws truncation_error (carrying the partial value and
// bound) when tol is unreachable within the order cap.
std::pair<double, CfTruncation> cf_value(double x, const FasConfig& cfg,
                                         double tol = 1e-10, int p_cap = 40);

// Exact special cases used as anchors and shortcuts.
double cf_value_iid(double x, const FasConfig& cfg);        // mu = 0
double cf_value_select_all(double x, const FasConfig& cfg); // K = N, any mu

} // namespace fas
