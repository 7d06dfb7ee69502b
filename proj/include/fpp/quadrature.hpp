#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace fpp::quad {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b] (relative tolerance 1e-12,
/// depth 20); throws when the error estimate exceeds 1e3 max(abs_tol, 1e-12 L1).
template <class F>
double gauss_kronrod(F&& f, double a, double b, double abs_tol = 1e-12) {
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 20, 1e-12, &error, &l1);
    if (!std::isfinite(value) || error > std::max(abs_tol, 1e-12 * l1) * 1e3) {
        throw QuadratureError("Gauss-Kronrod did not converge (error estimate " +
                              std::to_string(error) + ")");
    }
    return value;
}

/// Double-exponential (tanh-sinh) rule; tolerates integrable endpoint
/// singularities such as Beta densities with parameters below one.
template <class F>
double tanh_sinh(F&& f, double a, double b) {
    if (a == b) {
        return 0.0;
    }
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(f, a, b, 1e-14, &error, &l1);
    if (!std::isfinite(value) || error > 1e-9 * std::max(l1, 1.0)) {
        throw QuadratureError("tanh-sinh did not converge (error estimate " +
                              std::to_string(error) + ")");
    }
    return value;
}

/// tanh-sinh on [a, b] for f(x, x - a, b - x); the two distances are exact
/// next to the ends, where x itself has rounded onto a or b.
template <class F>
double tanh_sinh_ends(F&& f, double a, double b) {
    if (a == b) {
        return 0.0;
    }
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    const double half = 0.5 * (b - a);
    // Boost hands zc = 1 - z for z >= 0 and zc = -(1 + z) for z < 0
    const auto u = [&](double z, double zc) {
        if (z >= 0.0) {
            const double hi = half * zc;
            return f(b - hi, (b - a) - hi, hi);
        }
        const double lo = -half * zc;
        return f(a + lo, lo, (b - a) - lo);
    };
    double error = 0.0;
    double l1 = 0.0;
    const double value = half * integrator.integrate(u, 1e-14, &error, &l1);
    if (!std::isfinite(value) || error > 1e-9 * std::max(l1, 1.0)) {
        throw QuadratureError("tanh-sinh did not converge (error estimate " +
                              std::to_string(error) + ")");
    }
    return value;
}

/// Piecewise version of tanh_sinh_ends: f(x, x - first, last - x) with the
/// distances to the outermost breakpoints.
template <class F>
double piecewise_ends(F&& f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.size() < 2) {
        return 0.0;
    }
    const double first = breaks.front();
    const double last = breaks.back();
    double total = 0.0;
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        const bool left_end = i == 1;
        const bool right_end = i + 1 == breaks.size();
        total += tanh_sinh_ends(
            [&](double x, double d_lo, double d_hi) {
                return f(x, left_end ? d_lo : x - first, right_end ? d_hi : last - x);
            },
            breaks[i - 1], breaks[i]);
    }
    return total;
}

/// Sum of tanh-sinh integrals between consecutive sorted breakpoints.
template <class F>
double piecewise(F&& f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        total += tanh_sinh(f, breaks[i - 1], breaks[i]);
    }
    return total;
}

}  // namespace fpp::quad
