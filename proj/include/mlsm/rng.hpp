#ifndef MLSM_RNG_HPP
#define MLSM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mlsm {

// splitmix64 finalizer, used to turn seed paths into engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream on top of mt19937_64. Streams derived from
// the same master seed with distinct counters are independent for all
// practical purposes, so replicates and layers can be generated in any
// order (or concurrently) and still reproduce bit-exactly.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : seed_(seed), engine_(mix64(seed)) {}

    // Child stream keyed by a counter pair; derivation uses only the seed
    // path, never the evolving engine state.
    RandomStream derive(std::uint64_t a, std::uint64_t b = 0) const {
        return RandomStream(mix64(seed_ ^ mix64(a ^ 0x517cc1b727220a95ULL) ^
                                  mix64(b + 0x2545f4914f6cdd1dULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // 53-bit uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1]
    double uniform_open01() { return 1.0 - uniform01(); }

    // standard normal via Box-Muller (one draw per call, two uniforms)
    double normal() {
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace mlsm

#endif
