#pragma once

#include "fas/cf_engine.hpp"

namespace fas {

// Exact evaluation of the characteristic function (and of the SEP integral
// J) at real x <= 0 by conditioning on the common fading factor: given the
// shared component, the per-port powers are iid noncentral-exponential, and
// the best-K/MRC moment generating function reduces to a one-dimensional
// order-statistics integral. Cost is independent of the port correlation,
// which makes this the production path when the series cannot certify its
// truncation.
struct OneFactorOptions {
    double tol = 1e-10; // absolute tolerance on Psi
};

double cf_value_onefactor(double x, const FasConfig& cfg,
                          const OneFactorOptions& opts = {});

struct OneFactorJResult {
    double value = 0.0;
    double error_estimate = 0.0; // difference between the two finest grids
};

// (1/pi) Int_0^Theta Psi(-c/sin^2 theta) dtheta on a graded tensor grid over
// (common factor, theta) with the Bessel work amortized per common-factor
// node; self-checked by one grid refinement.
OneFactorJResult integral_J_onefactor(double c, double Theta, const FasConfig& cfg,
                                      double rel_tol = 1e-8, double abs_tol = 1e-12);

} // namespace fas
