#pragma once

#include "fas/cf_engine.hpp"
#include "fas/modulation.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fas {

enum class SepMethod { closed_form, quadrature, asymptotic, monte_carlo };

inline const char* sep_method_name(SepMethod m) {
    switch (m) {
        case SepMethod::closed_form: return "closed_form";
        case SepMethod::quadrature: return "quadrature";
        case SepMethod::asymptotic: return "asymptotic";
        case SepMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct SepDiagnostics {
    std::optional<CfTruncation> trunc;   // series truncation, when the series path ran
    std::optional<double> quad_error;    // quadrature error estimate, when one ran
    long kernel_fallbacks = 0;           // kernels recomputed by stable quadrature
    long pf_failures = 0;                // partial-fraction validations that failed
    std::string note;
};

struct SepResult {
    double value = 0.0;
    SepMethod method = SepMethod::closed_form;
    SepDiagnostics diag;
};

// The integral (1/pi) Int_0^Theta Psi(-c / sin^2 theta) dtheta.
struct IntegralSpec {
    double c = 1.0;
    double Theta = 1.5707963267948966;
    FasConfig cfg;
    void validate() const;
};

struct PartialFractionCoeffs {
    std::vector<std::vector<long double>> alpha; // alpha[k][n-1], n = 1..eta_k
    std::vector<double> sigma;                   // pole scales
    std::vector<int> eta;
    bool validated = false;
    double recon_error = 0.0;
};

// Decomposes prod_k (t/(t+sigma_k))^(eta_k) into sum_k sum_n alpha_{k,n}
// (t/(t+sigma_k))^n and validates the expansion at 5 deterministic sample
// points (relative 1e-8).
PartialFractionCoeffs partial_fraction_coeffs(const std::vector<double>& sigma,
                                              const std::vector<int>& eta);

// Scalar kernels of the closed form:
//   calH(i, ck, Theta) = (1/pi) Int_0^Theta (1 + ck sin^2)^(-i) dtheta
//   calG(n, ck, Theta) = (1/pi) Int_0^Theta (ck sin^2 / (1 + ck sin^2))^n dtheta
// evaluated by the finite closed forms (inverse-tangent branch handled on
// both sides of pi/2); calG falls back to direct quadrature of its positive
// integrand when the alternating binomial transform loses too many digits.
double calH(int i, double ck, double Theta);
double calG(int n, double ck, double Theta, long* fallback_counter = nullptr);

// Shared cache of partial-fraction tables for the (K+k-1) pole family.
class PartialFractionCache {
public:
    PartialFractionCache(int K, int Ntilde);
    const PartialFractionCoeffs& get(const std::vector<int>& eta);
    long validation_failures() const { return failures_; }

private:
    struct Hash {
        size_t operator()(const std::vector<int>& v) const;
    };
    int K_, Ntilde_;
    std::unordered_map<std::vector<int>, PartialFractionCoeffs, Hash> map_;
    std::mutex mu_;
    long failures_ = 0;
};

// Per-signature kernel F_eta = (1/pi) Int_0^Theta prod_k (sin^2/(sin^2+sigma_k))^(eta_k).
double calF(const std::vector<int>& eta, const IntegralSpec& spec,
            PartialFractionCache& cache, SepDiagnostics* diag = nullptr);

struct JOptions {
    double tol = 1e-9;          // certification target (relative, with abs floor)
    MassTableOptions mass;      // series truncation controls
    double quad_abs = 1e-13;
    double quad_rel = 1e-11;
};

// Closed-form evaluation from the truncated signature masses. Never falls
// back internally; diagnostics carry the rigorous tail bound.
SepResult integral_J(const IntegralSpec& spec, const JOptions& opts = {},
                     const MassTable* shared_table = nullptr,
                     PartialFractionCache* shared_cache = nullptr);

enum class QuadBackend { series_truncated, one_factor };

// Adaptive quadrature of theta -> Psi(-c/sin^2 theta). With the series
// backend (and the same mass table) this is the algebra oracle for
// integral_J; with the one-factor backend it is an exact evaluation whose
// cost does not depend on the correlation.
SepResult integral_J_quadrature(const IntegralSpec& spec,
                                QuadBackend backend = QuadBackend::series_truncated,
                                const JOptions& opts = {},
                                const MassTable* shared_table = nullptr);

// Exact closed form for K = N via the two-eigenvalue pole pair (any mu).
SepResult integral_J_select_all(const IntegralSpec& spec, const JOptions& opts = {});

struct SepOptions {
    enum class Path { automatic, closed, quadrature, asymptotic } path = Path::automatic;
    double tol = 1e-9;
    MassTableOptions mass;
    double quad_abs = 1e-13;
    double quad_rel = 1e-11;
};

SepResult sep_ask(int M, const FasConfig& cfg, const SepOptions& opts = {});
SepResult sep_psk(int M, const FasConfig& cfg, const SepOptions& opts = {});
SepResult sep_qam(int M, const FasConfig& cfg, const SepOptions& opts = {});
SepResult sep_bfsk(const FasConfig& cfg, const SepOptions& opts = {});
SepResult sep(Modulation mod, int M, const FasConfig& cfg, const SepOptions& opts = {});

// High-SNR asymptotes and their K/mu factor.
double calK(const FasConfig& cfg);
SepResult sep_asymptotic(Modulation mod, int M, const FasConfig& cfg);

} // namespace fas
