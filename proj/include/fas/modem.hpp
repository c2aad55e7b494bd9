#pragma once

#include "fas/modulation.hpp"

#include <complex>
#include <vector>

namespace fas {

struct ModulationScheme {
    Modulation kind = Modulation::bfsk;
    int M = 2;
    void validate() const;
    std::string name() const; // e.g. "psk8", "bfsk"
    static ModulationScheme parse(const std::string& token); // "qam16", "ask2", ...
};

struct Constellation {
    std::vector<std::complex<double>> points; // ordered by m (row-major for QAM)
    double E_av = 1.0;
    ModulationScheme scheme;
};

Constellation build_constellation(const ModulationScheme& scheme, double E_av);

// Optimal ML decision argmin_m |z - h_norm * s_m|^2; ties -> lowest index.
int detect_ml_generic(std::complex<double> z, double h_norm, const Constellation& c);

// Scheme-specific simplifications of the same rule.
int detect_ask(std::complex<double> z, double h_norm, const Constellation& c);
int detect_psk(std::complex<double> z, const Constellation& c);
int detect_bfsk(std::complex<double> z);

} // namespace fas
