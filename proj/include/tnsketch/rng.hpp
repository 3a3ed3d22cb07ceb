#ifndef TNSKETCH_RNG_HPP
#define TNSKETCH_RNG_HPP

#include <cstdint>

namespace tnsketch {

/// Identifies one deterministic variate stream. The same (seed, stream) pair
/// always yields the same sequence within a build; distinct streams are
/// treated as independent.
struct RandomSource {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RandomSource with_stream(std::uint64_t s) const { return {seed, s}; }
};

/// Counter-based generator: output i is a fixed 64-bit mix of (key, i), so a
/// stream can be regenerated from its RandomSource alone. Normal variates use
/// Box-Muller on the uniform stream.
class CounterRng {
public:
    explicit CounterRng(RandomSource src);

    std::uint64_t next_u64();
    /// Uniform in (0, 1].
    double uniform01();
    /// Standard normal.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tnsketch

#endif  // TNSKETCH_RNG_HPP
