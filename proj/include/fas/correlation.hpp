#pragma once

#include <complex>
#include <optional>
#include <random>
#include <vector>

namespace fas {

// Uniform port-correlation model: every pair of ports shares the same
// amplitude correlation mu; covariance off-diagonals are mu^2 * sigma_h2.
struct CorrelationModel {
    double mu = 0.0;               // in [0, 1)
    std::optional<double> W;       // aperture in wavelengths, if mu came from W
    double sigma_h2 = 1.0;

    static CorrelationModel from_mu(double mu, double sigma_h2 = 1.0);
    static CorrelationModel from_w(double W, double sigma_h2 = 1.0);
};

// mu = sqrt(2 [ 1F2(1/2;1;3/2; -pi^2 W^2) - J1(2 pi W)/(2 pi W) ]), with the
// radicand clamped against floating noise: values in (1, 1+1e-9] map to
// (1-1e-12)^2, values in [-1e-12, 0) map to 0. Anything further out throws.
double mu_from_w(double W);

// Covariance entry (i, j), 1-based indices in [1, N].
double covariance_entry(int i, int j, int N, const CorrelationModel& model);

using FadingVector = std::vector<std::complex<double>>;

// One-factor construction h_k = sigma_h (mu x0 + sqrt(1-mu^2) x_k) with
// x0, x_1..x_N iid standard complex Gaussian; reproduces the uniform
// covariance exactly in O(N) per draw.
FadingVector sample_fading(int N, const CorrelationModel& model, std::mt19937_64& rng);

} // namespace fas
