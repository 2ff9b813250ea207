#pragma once

#include <array>

namespace paraamp::numerics {

/// Central-difference estimate of the first or second derivative of `f` at
/// `x`, improved by two Richardson levels (steps h, h/2, h/4), giving an
/// O(h^6) truncation error.
template <int Order, typename F>
double richardson_derivative(F&& f, double x, double h) {
    static_assert(Order == 1 || Order == 2, "only first and second derivatives are supported");
    auto central = [&](double step) {
        if constexpr (Order == 1) {
            return (f(x + step) - f(x - step)) / (2.0 * step);
        } else {
            return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
        }
    };
    std::array<double, 3> d{central(h), central(h / 2.0), central(h / 4.0)};
    // Level 1 removes the h^2 term, level 2 the h^4 term.
    const double r0 = (4.0 * d[1] - d[0]) / 3.0;
    const double r1 = (4.0 * d[2] - d[1]) / 3.0;
    return (16.0 * r1 - r0) / 15.0;
}

}  // namespace paraamp::numerics
