#pragma once

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "paraamp/errors.hpp"

namespace paraamp::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double l1_norm = 0.0;
};

namespace detail {

// Boost's own recursive driver reports the Kronrod-Gauss difference of each
// panel before scaling by the panel half-width, which inflates the error of
// small panels. Each panel here is mapped onto [-1, 1] with the Jacobian
// folded into the integrand, so the single-panel rule returns scaled values.
template <typename F>
QuadratureResult gk15_panel(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    QuadratureResult r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double t) { return half * f(mid + half * t); }, -1.0, 1.0, 0, 0.0, &r.error_estimate, &r.l1_norm);
    return r;
}

template <typename F>
QuadratureResult adaptive(F& f, double a, double b, const QuadratureResult& whole, double abs_tol, unsigned depth) {
    if (depth == 0 || whole.error_estimate <= abs_tol) {
        return whole;
    }
    const double m = 0.5 * (a + b);
    const auto left = adaptive(f, a, m, gk15_panel(f, a, m), 0.5 * abs_tol, depth - 1);
    const auto right = adaptive(f, m, b, gk15_panel(f, m, b), 0.5 * abs_tol, depth - 1);
    return {left.value + right.value, left.error_estimate + right.error_estimate, left.l1_norm + right.l1_norm};
}

}  // namespace detail

/// Adaptive 15-point Gauss-Kronrod integral of `f` over [a, b].
///
/// Throws NumericalError when the error estimate exceeds `rel_tol` times the
/// L1 norm of the integrand after `max_depth` bisections. A reversed interval
/// returns the negated integral.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 20) {
    if (a == b) {
        return {};
    }
    if (b < a) {
        auto r = integrate(f, b, a, rel_tol, max_depth);
        r.value = -r.value;
        return r;
    }
    const auto first = detail::gk15_panel(f, a, b);
    const auto out = detail::adaptive(f, a, b, first, rel_tol * first.l1_norm, max_depth);
    if (!std::isfinite(out.value) || out.error_estimate > rel_tol * out.l1_norm) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "adaptive quadrature did not converge on [" << a << ", " << b << "]: value=" << out.value
            << " error_estimate=" << out.error_estimate << " l1=" << out.l1_norm << " rel_tol=" << rel_tol
            << " max_depth=" << max_depth;
        throw NumericalError(msg.str());
    }
    return out;
}

}  // namespace paraamp::numerics
