#pragma once

#include <cstdint>
#include <random>

namespace stochsolid {

/// Stream-splittable random source.
///
/// Every stream is identified by (seed, stream index); the pair is hashed into
/// the seed of an independent Mersenne Twister so that per-trial, per-pixel or
/// per-tile streams are reproducible regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : m_engine(mix(mix(seed) ^ (stream + 0x632be59bd9b4e019ULL))) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

    std::mt19937_64 &engine() { return m_engine; }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 m_engine;
};

}  // namespace stochsolid
