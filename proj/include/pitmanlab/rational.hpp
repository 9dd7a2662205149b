#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace pitmanlab {

// Exact rational scalar used by the symbolic moment calculus. Every finite
// double is a dyadic rational, so conversion from double is exact.
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_pow(Rat base, unsigned e) {
    Rat out = 1;
    while (e != 0) {
        if (e & 1u) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

inline Rat binomial_rat(unsigned n, unsigned k) {
    if (k > n) return 0;
    boost::multiprecision::cpp_int num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) {
        num *= (n - i);
        den *= (i + 1);
    }
    return Rat(num, den);
}

inline std::string rat_str(const Rat& r) { return r.str(); }

} // namespace pitmanlab
