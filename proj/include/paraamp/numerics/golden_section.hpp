#pragma once

#include <cmath>
#include <numbers>

namespace paraamp::numerics {

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal `f` on [a, b].
/// Stops once the bracket is narrower than `x_tol`.
template <typename F>
Extremum golden_section_maximize(F&& f, double a, double b, double x_tol) {
    constexpr double inv_phi = std::numbers::phi - 1.0;  // 1/phi
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (std::abs(b - a) > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace paraamp::numerics
