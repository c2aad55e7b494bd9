#pragma once

#include <functional>

namespace fas {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f on [a,b].
// Stops when the summed error estimate drops below
// max(abs_tol, rel_tol*|integral|) or max_depth bisections are exhausted.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b,
                              double abs_tol = 1e-12, double rel_tol = 1e-12,
                              int max_depth = 48);

} // namespace fas
