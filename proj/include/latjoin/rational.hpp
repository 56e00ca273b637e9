#pragma once
// Exact arithmetic used everywhere in correctness paths: arbitrary-precision
// integers and rationals from boost::multiprecision.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace latjoin {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool rat_is_integer(const Rat& q) { return rat_den(q) == 1; }

// "p/q" (or "p" when integral), the serialization format used in all reports.
inline std::string rat_str(const Rat& q) {
    if (rat_is_integer(q)) return rat_num(q).str();
    return rat_num(q).str() + "/" + rat_den(q).str();
}

// Parse "p/q" or "p".
inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

inline Int pow2(uint64_t e) {
    Int r = 1;
    r <<= e;
    return r;
}

// floor(log2(x)) for x >= 1.
inline uint64_t floor_log2(const Int& x) {
    if (x <= 0) throw std::invalid_argument("floor_log2: nonpositive");
    return boost::multiprecision::msb(x);
}

// ceil(log2(x)) for x >= 1.
inline uint64_t ceil_log2(const Int& x) {
    uint64_t f = floor_log2(x);
    return pow2(f) == x ? f : f + 1;
}

inline bool is_power_of_two(const Int& x) {
    return x > 0 && pow2(floor_log2(x)) == x;
}

// Enclosure [lo, hi] with lo <= 2^prec * log2(x) <= hi, computed by the
// classic square-and-shift fixed-point iteration on an interval mantissa.
// The width hi-lo shrinks as prec grows; since log2(x) is irrational for x
// not a power of two, any strict comparison against a rational is eventually
// decided by refining prec.
inline std::pair<Int, Int> log2_enclosure(const Int& x, uint64_t prec) {
    uint64_t e = floor_log2(x);
    Int one = pow2(prec);
    Int two = one << 1;
    // mantissa m = x / 2^e in [1,2), scaled by 2^prec
    Int m_lo = (x << prec) >> e;
    Int m_hi = ((x << prec) + (pow2(e) - 1)) >> e;
    Int r_lo = 0, r_hi = 0;
    for (uint64_t i = 0; i < prec; ++i) {
        m_lo = (m_lo * m_lo) >> prec;                 // floor: stays a lower bound
        m_hi = ((m_hi * m_hi) + one - 1) >> prec;     // ceil: stays an upper bound
        r_lo <<= 1;
        r_hi <<= 1;
        if (m_lo >= two) { m_lo >>= 1; r_lo += 1; }
        if (m_hi >= two) { m_hi = (m_hi + 1) >> 1; r_hi += 1; }
        if (m_hi >= two) { m_hi = (m_hi + 1) >> 1; r_hi += 1; }  // ceil may land on 4
    }
    Int base = Int(e) << prec;
    return {base + r_lo, base + r_hi + 1};
}

// Exact test  log2(x) <= a/b  for an integer x >= 1 and rational a/b.
inline bool log2_leq(const Int& x, const Rat& bound) {
    if (x <= 0) throw std::invalid_argument("log2_leq: nonpositive");
    if (x == 1) return bound >= 0;
    if (bound < 0) return false;
    Int a = rat_num(bound), b = rat_den(bound);
    if (is_power_of_two(x)) return Int(floor_log2(x)) * b <= a;
    // log2(x) irrational: refine an enclosure until it decides
    for (uint64_t prec = 64;; prec *= 2) {
        auto [lo, hi] = log2_enclosure(x, prec);
        // compare [lo,hi]/2^prec against a/b
        if (hi * b <= (a << prec)) return true;
        if (lo * b >= (a << prec)) return false;
        if (prec > (1u << 20)) throw std::runtime_error("log2_leq: failed to converge");
    }
}

// Exact test  log2(x) < a/b.  For x not a power of two this coincides with <=.
inline bool log2_less(const Int& x, const Rat& bound) {
    if (x <= 0) throw std::invalid_argument("log2_less: nonpositive");
    if (x == 1) return bound > 0;
    if (is_power_of_two(x)) return Rat(Int(floor_log2(x))) < bound;
    return log2_leq(x, bound);
}

// Smallest rational k/2^denom_log2 that is >= log2(x).  Rounding up keeps
// every derived bound a valid upper bound.
inline Rat dyadic_log2_ceil(const Int& x, uint64_t denom_log2) {
    if (x <= 0) throw std::invalid_argument("dyadic_log2_ceil: nonpositive");
    if (is_power_of_two(x)) return Rat(floor_log2(x));
    for (uint64_t prec = denom_log2 + 64;; prec *= 2) {
        auto [lo, hi] = log2_enclosure(x, prec);
        Int k_lo = (lo >> (prec - denom_log2)) + 1;  // ceil of lower estimate
        Int k_hi = (hi >> (prec - denom_log2)) + 1;
        if (k_lo == k_hi) return Rat(k_lo, pow2(denom_log2));
        if (prec > (1u << 20)) throw std::runtime_error("dyadic_log2_ceil: failed to converge");
    }
}

}  // namespace latjoin
