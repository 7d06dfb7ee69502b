#include "fpp/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fpp {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be positive and finite, got " +
                                std::to_string(v));
    }
}

}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma argument");
    if (x < 0.5) {
        // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double series = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
        series += kLanczosCoef[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(series);
}

double log_beta_function(double alpha, double beta) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    return log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta);
}

double beta_function(double alpha, double beta) {
    return std::exp(log_beta_function(alpha, beta));
}

double beta_moment(double alpha, double beta, double gamma) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    require_positive(gamma, "gamma");
    return std::exp(log_gamma(alpha + beta) + log_gamma(alpha + gamma) - log_gamma(alpha) -
                    log_gamma(alpha + beta + gamma));
}

double beta_mgf(double alpha, double beta, double t) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    if (!(std::abs(t) <= 50.0)) {
        throw std::domain_error("beta_mgf requires |t| <= 50");
    }
    if (t == 0.0) {
        return 1.0;
    }
    // B(alpha+k, beta)/B(alpha, beta) = prod_{j<k} (alpha+j)/(alpha+beta+j)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double j = static_cast<double>(k - 1);
        term *= t / static_cast<double>(k) * (alpha + j) / (alpha + beta + j);
        sum += term;
        if (std::abs(term) < 1e-15 * std::abs(sum)) {
            return sum;
        }
    }
    throw std::runtime_error("beta_mgf: series did not converge within 200 terms");
}

}  // namespace fpp
