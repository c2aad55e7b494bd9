#pragma once

#include <cstdint>
#include <cmath>
#include <complex>
#include <random>

namespace fas {

// splitmix64; used to derive independent per-chunk seeds from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (index + 1)));
}

// Uniform double in (0, 1]; the explicit mapping keeps results identical
// across standard libraries (std distributions are not pinned down).
inline double uniform_unit(std::mt19937_64& rng) {
    return (double)((rng() >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller pair of independent N(0,1) draws.
struct GaussPair {
    double a, b;
};

inline GaussPair gaussian_pair(std::mt19937_64& rng) {
    const double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925287 * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

// Standard complex Gaussian CN(0,1): variance 1/2 per real dimension.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
    const GaussPair g = gaussian_pair(rng);
    return {g.a * 0.7071067811865475244, g.b * 0.7071067811865475244};
}

} // namespace fas
