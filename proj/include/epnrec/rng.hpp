#ifndef EPNREC_RNG_HPP
#define EPNREC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace epnrec {

// splitmix64 step; used for seed mixing only, never as the main stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic substream derivation: (base, stream) -> child seed.
// Scenario i of an experiment uses base_seed + i as its base; within a
// scenario, named streams (intensity field, damage draws, policy) get
// distinct `stream` tags.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0x5851f42d4c957f2dULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

// mt19937_64 with explicit variate transforms. The std:: distribution
// objects are implementation-defined; the transforms below make the
// streams a function of the engine output alone, so a (config, seed)
// pair replays bit-identically.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller; two uniforms per call, no cached
    // spare, so consumption is position-independent.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace epnrec

#endif
