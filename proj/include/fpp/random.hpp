#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "fpp/model.hpp"

namespace fpp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output k of stream (seed, path) is
/// mix64(key + k * golden) with key derived from both. Streams for different
/// paths are independent of the order in which they are consumed.
class PathRng {
public:
    using result_type = std::uint64_t;

    PathRng(std::uint64_t seed, std::uint64_t path)
        : key_(mix64(mix64(seed) ^ mix64(path + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1).
    double uniform_open() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Standard normal by the polar method; keeps the spare variate.
class NormalSampler {
public:
    template <class Rng>
    double operator()(Rng& rng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * rng.uniform() - 1.0;
            v = 2.0 * rng.uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Gamma(shape, 1) by Marsaglia-Tsang; shapes below one use the
/// Gamma(shape + 1) * U^(1/shape) boost.
template <class Rng>
double sample_gamma(Rng& rng, double shape) {
    if (shape < 1.0) {
        const double u = rng.uniform_open();
        return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    NormalSampler normal;
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Beta(alpha, beta) as X / (X + Y) with X ~ Gamma(alpha), Y ~ Gamma(beta).
template <class Rng>
double sample_beta(Rng& rng, double alpha, double beta) {
    for (;;) {
        const double x = sample_gamma(rng, alpha);
        const double y = sample_gamma(rng, beta);
        if (x + y > 0.0) return x / (x + y);  // both underflow only for tiny shapes
    }
}

/// Draw from a starting density: Beta variants via gamma ratios mapped
/// affinely onto the support, tabulated densities by CDF inversion.
template <class Rng>
double sample_density(Rng& rng, const DensitySpec& g) {
    const Interval s = g.support();
    switch (g.kind()) {
        case DensityKind::Uniform: return s.a + s.length() * rng.uniform();
        case DensityKind::Beta:
        case DensityKind::ModifiedBeta:
            return s.a + s.length() * sample_beta(rng, g.alpha(), g.beta_param());
        case DensityKind::Tabulated: {
            const auto x = g.nodes();
            const auto y = g.node_values();
            double target = rng.uniform();
            for (std::size_t i = 1; i < x.size(); ++i) {
                const double w = x[i] - x[i - 1];
                const double mass = 0.5 * (y[i] + y[i - 1]) * w;
                if (target <= mass || i + 1 == x.size()) {
                    // solve g0 t + (g1 - g0) t^2 / (2 w) = target for t in [0, w]
                    const double slope = (y[i] - y[i - 1]) / w;
                    double t;
                    if (std::abs(slope) < 1e-300) {
                        t = y[i - 1] > 0.0 ? target / y[i - 1] : 0.5 * w;
                    } else {
                        const double disc = y[i - 1] * y[i - 1] + 2.0 * slope * target;
                        t = (-y[i - 1] + std::sqrt(std::max(disc, 0.0))) / slope;
                    }
                    return x[i - 1] + std::clamp(t, 0.0, w);
                }
                target -= mass;
            }
            return x.back();
        }
    }
    return s.a;
}

}  // namespace fpp
