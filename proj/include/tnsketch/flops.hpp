#ifndef TNSKETCH_FLOPS_HPP
#define TNSKETCH_FLOPS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace tnsketch {

/// Arbitrary-precision integer used for all modeled costs and flop counters.
/// Size products overflow 64 bits already for modest networks, so counting is
/// promoted instead of wrapping.
using BigInt = boost::multiprecision::cpp_int;

/// Smallest k >= 0 with k*k >= x.
inline BigInt isqrt_ceil(const BigInt& x) {
    if (x <= 0) return 0;
    BigInt r = boost::multiprecision::sqrt(x);  // floor sqrt
    if (r * r < x) ++r;
    return r;
}

/// Nearest integer to sqrt(x) (floor sqrt, bumped when the remainder
/// crosses the midpoint).
inline BigInt isqrt_round(const BigInt& x) {
    if (x <= 0) return 0;
    BigInt r = boost::multiprecision::sqrt(x);
    // round up when x >= (r + 1/2)^2 = r^2 + r + 1/4
    if (x - r * r > r) ++r;
    return r;
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

inline std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace tnsketch

#endif  // TNSKETCH_FLOPS_HPP
