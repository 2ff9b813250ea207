#pragma once

#include <cstdint>
#include <sstream>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "paraamp/errors.hpp"

namespace paraamp::numerics {

/// Root of a continuous `f` on a sign-changing bracket [lo, hi].
///
/// Uses TOMS 748 (bracketing, guaranteed convergence). Terminates when the
/// bracket width is below `bits` binary digits of relative precision.
template <typename F>
double bracketed_root(F&& f, double lo, double hi, int bits = 50, std::uintmax_t max_iter = 200) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "root is not bracketed: f(" << lo << ")=" << f_lo << ", f(" << hi << ")=" << f_hi;
        throw DomainError(msg.str());
    }
    std::uintmax_t iters = max_iter;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(bits), iters);
    if (iters >= max_iter) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "root finding hit the iteration limit (" << max_iter << ") with bracket [" << a << ", " << b << "]";
        throw NumericalError(msg.str());
    }
    return 0.5 * (a + b);
}

}  // namespace paraamp::numerics
