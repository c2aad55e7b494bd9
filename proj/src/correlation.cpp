#include "fas/correlation.hpp"
#include "fas/specfun.hpp"
#include "fas/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>

namespace fas {

CorrelationModel CorrelationModel::from_mu(double mu, double sigma_h2) {
    if (!(mu >= 0.0) || mu >= 1.0)
        throw std::invalid_argument("CorrelationModel: mu must lie in [0, 1)");
    if (!(sigma_h2 > 0.0))
        throw std::invalid_argument("CorrelationModel: sigma_h2 must be > 0");
    CorrelationModel m;
    m.mu = mu;
    m.sigma_h2 = sigma_h2;
    return m;
}

CorrelationModel CorrelationModel::from_w(double W, double sigma_h2) {
    CorrelationModel m = from_mu(mu_from_w(W), sigma_h2);
    m.W = W;
    return m;
}

double mu_from_w(double W) {
    if (!(W > 0.0))
        throw std::invalid_argument("mu_from_w: W must be positive");
    const double piW = std::numbers::pi * W;
    const double x = -piW * piW;
    const double twoPiW = 2.0 * piW;
    const double j1_term = specfun::bessel_j1(twoPiW) / twoPiW;
    double radicand = 2.0 * (specfun::hyp1f2_half(x) - j1_term);
    if (radicand > 1.0) {
        if (radicand > 1.0 + 1e-9)
            throw std::runtime_error("mu_from_w: radicand inconsistent (> 1)");
        return 1.0 - 1e-12;
    }
    if (radicand < 0.0) {
        if (radicand < -1e-12)
            throw std::runtime_error("mu_from_w: radicand inconsistent (< 0)");
        return 0.0;
    }
    double mu = std::sqrt(radicand);
    if (mu >= 1.0) mu = 1.0 - 1e-12;
    return mu;
}

double covariance_entry(int i, int j, int N, const CorrelationModel& model) {
    if (i < 1 || i > N || j < 1 || j > N)
        throw std::out_of_range("covariance_entry: index out of range");
    if (i == j) return model.sigma_h2;
    return model.mu * model.mu * model.sigma_h2;
}

FadingVector sample_fading(int N, const CorrelationModel& model, std::mt19937_64& rng) {
    if (N < 1) throw std::invalid_argument("sample_fading: N must be >= 1");
    const double sh = std::sqrt(model.sigma_h2);
    const double mu = model.mu;
    const double res = std::sqrt(1.0 - mu * mu);
    const std::complex<double> common = complex_gaussian(rng);
    FadingVector h(N);
    for (int k = 0; k < N; ++k) {
        h[k] = sh * (mu * common + res * complex_gaussian(rng));
    }
    return h;
}

} // namespace fas
