#include "fas/modem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fas {

void ModulationScheme::validate() const {
    if (M < 2) throw std::invalid_argument("ModulationScheme: M must be >= 2");
    switch (kind) {
        case Modulation::bfsk:
            if (M != 2) throw std::invalid_argument("BFSK requires M = 2");
            break;
        case Modulation::qam: {
            const int rt = (int)std::llround(std::sqrt((double)M));
            if (rt * rt != M || M < 4)
                throw std::invalid_argument("QAM requires square M >= 4");
            break;
        }
        default:
            break;
    }
}

std::string ModulationScheme::name() const {
    if (kind == Modulation::bfsk) return "bfsk";
    return std::string(modulation_name(kind)) + std::to_string(M);
}

ModulationScheme ModulationScheme::parse(const std::string& token) {
    size_t i = 0;
    while (i < token.size() && std::isalpha((unsigned char)token[i])) ++i;
    ModulationScheme s;
    s.kind = modulation_from_name(token.substr(0, i));
    s.M = (i < token.size()) ? std::stoi(token.substr(i)) : 2;
    s.validate();
    return s;
}

Constellation build_constellation(const ModulationScheme& scheme, double E_av) {
    scheme.validate();
    if (!(E_av > 0)) throw std::invalid_argument("build_constellation: E_av must be > 0");
    Constellation c;
    c.scheme = scheme;
    c.E_av = E_av;
    const int M = scheme.M;
    switch (scheme.kind) {
        case Modulation::ask: {
            const double a = std::sqrt(3.0 * E_av / ((double)M * M - 1.0));
            for (int m = 1; m <= M; ++m)
                c.points.emplace_back(a * (2 * m - 1 - M), 0.0);
            break;
        }
        case Modulation::psk: {
            const double r = std::sqrt(E_av);
            for (int m = 1; m <= M; ++m) {
                const double ph = 2.0 * std::numbers::pi * (m - 1) / M;
                c.points.emplace_back(r * std::cos(ph), r * std::sin(ph));
            }
            break;
        }
        case Modulation::qam: {
            const int rt = (int)std::llround(std::sqrt((double)M));
            const double a = std::sqrt(3.0 * E_av / (2.0 * (M - 1)));
            for (int m1 = 1; m1 <= rt; ++m1)
                for (int m2 = 1; m2 <= rt; ++m2)
                    c.points.emplace_back(a * (2 * m1 - 1 - rt), a * (2 * m2 - 1 - rt));
            break;
        }
        case Modulation::bfsk: {
            const double r = std::sqrt(E_av);
            c.points.emplace_back(r, 0.0);
            c.points.emplace_back(0.0, r);
            break;
        }
    }
    return c;
}

int detect_ml_generic(std::complex<double> z, double h_norm, const Constellation& c) {
    if (c.points.empty()) throw std::invalid_argument("detect_ml_generic: empty constellation");
    int best = 0;
    double bestd = std::norm(z - h_norm * c.points[0]);
    for (int m = 1; m < (int)c.points.size(); ++m) {
        const double d = std::norm(z - h_norm * c.points[(size_t)m]);
        if (d < bestd) {
            bestd = d;
            best = m;
        }
    }
    return best;
}

int detect_ask(std::complex<double> z, double h_norm, const Constellation& c) {
    if (c.points.empty()) throw std::invalid_argument("detect_ask: empty constellation");
    int best = 0;
    double bestm = -1e300;
    const double re = z.real();
    for (int m = 0; m < (int)c.points.size(); ++m) {
        const double s = c.points[(size_t)m].real();
        const double metric = s * re - 0.5 * s * s * h_norm;
        if (metric > bestm) {
            bestm = metric;
            best = m;
        }
    }
    return best;
}

int detect_psk(std::complex<double> z, const Constellation& c) {
    if (c.points.empty()) throw std::invalid_argument("detect_psk: empty constellation");
    int best = 0;
    double bestm = -1e300;
    for (int m = 0; m < (int)c.points.size(); ++m) {
        const double metric =
            z.real() * c.points[(size_t)m].real() + z.imag() * c.points[(size_t)m].imag();
        if (metric > bestm) {
            bestm = metric;
            best = m;
        }
    }
    return best;
}

int detect_bfsk(std::complex<double> z) {
    return z.real() > z.imag() ? 0 : 1;
}

} // namespace fas
