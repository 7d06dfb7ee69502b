#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace fpp {

struct NelderMeadOptions {
    double f_tolerance = 1e-12;  // absolute spread of simplex values
    double x_tolerance = 1e-12;  // largest vertex distance from the best vertex
    std::size_t max_iterations = 4000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Downhill simplex with the standard coefficients (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). The initial simplex is x0
/// plus one vertex per coordinate offset by step[i].
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0,
                                    const std::vector<double>& step,
                                    const NelderMeadOptions& options = {}) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += step[i];
    }
    for (std::size_t i = 0; i <= dim; ++i) {
        values[i] = f(simplex[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    const auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                           double coef) {
        std::vector<double> p(dim);
        for (std::size_t j = 0; j < dim; ++j) p[j] = centroid[j] + coef * (worst[j] - centroid[j]);
        return p;
    };

    NelderMeadResult result;
    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        double spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                d = std::max(d, std::abs(simplex[i][j] - simplex[best][j]));
            }
            spread = std::max(spread, d);
        }
        if (values[worst] - values[best] <= options.f_tolerance && spread <= options.x_tolerance) {
            result.converged = true;
            break;
        }
        if (spread <= 1e-15) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / dim;
        }

        const auto reflected = point(centroid, simplex[worst], -1.0);
        const double f_reflected = f(reflected);
        if (f_reflected < values[best]) {
            const auto expanded = point(centroid, simplex[worst], -2.0);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < values[worst];
        const auto contracted = point(centroid, simplex[worst], outside ? -0.5 : 0.5);
        const double f_contracted = f(contracted);
        if (f_contracted < (outside ? f_reflected : values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = f(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

}  // namespace fpp
