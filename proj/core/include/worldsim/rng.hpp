#pragma once

#include <cstdint>

namespace worldsim {

// Counter-based generator (splitmix64 finalizer over an additive counter).
// Streams are derived from a seed plus a key path, so realization i's draws
// depend only on (seed, i) and never on how many other streams were consumed.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return finalize(state_);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n > 0. Modulo bias is irrelevant at the
    // sample counts used here and keeps the draw count deterministic.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    static std::uint64_t finalize(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0,
                             std::uint64_t k3 = 0) {
    std::uint64_t s = RngStream::finalize(seed ^ 0x8e9c1ce9302aa2d9ULL);
    s = RngStream::finalize(s ^ (k1 + 0x165667b19e3779f9ULL));
    s = RngStream::finalize(s ^ (k2 + 0x27d4eb2f165667c5ULL));
    s = RngStream::finalize(s ^ (k3 + 0x85ebca6b2b2ae35ULL));
    return RngStream(s);
}

} // namespace worldsim
