#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pitmanlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Adaptive Gauss-Kronrod on [a,b]; either endpoint may be infinite.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, unsigned max_depth = 18) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol, &err);
}

// Same, but splits the range at the given breakpoints (densities with kinks:
// Laplace at 0, uniform-sum knots). Breakpoints outside (a,b) are ignored.
inline double integrate_segmented(const std::function<double(double)>& f, double a, double b,
                                  std::vector<double> breaks, double tol = 1e-10,
                                  unsigned max_depth = 18) {
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    double lo = a;
    for (double br : breaks) {
        if (!(br > lo) || !(br < b)) continue;
        total += integrate(f, lo, br, tol, max_depth);
        lo = br;
    }
    total += integrate(f, lo, b, tol, max_depth);
    return total;
}

} // namespace pitmanlab
