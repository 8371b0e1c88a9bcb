#ifndef HIERSUM_RNG_HPP
#define HIERSUM_RNG_HPP

#include <cstdint>
#include <random>

namespace hiersum {

/// Seeded generator with platform-independent derived draws (the standard
/// distributions are implementation-defined; these are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, n); n > 0. Modulo bias is irrelevant at these ranges.
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    int int_in(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 eng_;
};

} // namespace hiersum

#endif
