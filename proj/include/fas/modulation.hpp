#pragma once

#include <stdexcept>
#include <string>

namespace fas {

enum class Modulation { ask, psk, qam, bfsk };

inline const char* modulation_name(Modulation m) {
    switch (m) {
        case Modulation::ask: return "ask";
        case Modulation::psk: return "psk";
        case Modulation::qam: return "qam";
        case Modulation::bfsk: return "bfsk";
    }
    return "?";
}

inline Modulation modulation_from_name(const std::string& s) {
    if (s == "ask") return Modulation::ask;
    if (s == "psk") return Modulation::psk;
    if (s == "qam") return Modulation::qam;
    if (s == "bfsk") return Modulation::bfsk;
    throw std::invalid_argument("unknown modulation '" + s + "'");
}

} // namespace fas
