#include "fpp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fpp/quadrature.hpp"

namespace fpp {

const char* to_string(ExtensionPolicy policy) {
    return policy == ExtensionPolicy::OuterConditions ? "outer" : "analytic";
}

Candidate Candidate::from_closed_form(const ClosedFormPia& pia) {
    return {
        [pia](double x) { return pia(x, ClosedFormMode::Analytic); },
        [pia](double x) { return pia.derivative(x); },
        [pia](double x) { return pia.second_derivative(x); },
    };
}

namespace {

double extended_value(const Candidate& v, const Interval& I, double y, ExtensionPolicy policy) {
    if (policy == ExtensionPolicy::OuterConditions) {
        if (y <= I.a) return 1.0;
        if (y >= I.b) return 0.0;
    }
    return v.value(y);
}

// E[v(x + J)] for one stream's jump J.
double expected_landing_value(const JumpStream& stream, const Candidate& v, const Interval& I,
                              double x, ExtensionPolicy policy) {
    const auto [lo, hi] = stream.kernel.jump_range(x);
    if (stream.kernel.is_point_mass()) {
        return extended_value(v, I, x + lo, policy);
    }
    const double width = hi - lo;
    if (!(width > 0.0)) {
        // degenerate range at x = 0: the average tends to v(x)
        return v.value(x);
    }
    const double y0 = x + lo;
    const double y1 = x + hi;
    double total = 0.0;
    if (policy == ExtensionPolicy::OuterConditions) {
        total += std::max(0.0, std::min(y1, I.a) - y0);  // mass left of a, value 1
        const double in0 = std::max(y0, I.a);
        const double in1 = std::min(y1, I.b);
        if (in1 > in0) {
            total += quad::gauss_kronrod(v.value, in0, in1, 1e-12);
        }
    } else {
        total = quad::gauss_kronrod(v.value, y0, y1, 1e-12);
    }
    return total / width;
}

}  // namespace

double nonlocal_term(const ProcessSpec& spec, const Candidate& v, double x,
                     ExtensionPolicy policy) {
    double result = 0.0;
    const double vx = v.value(x);
    for (const JumpStream* stream : {&spec.up_jumps, &spec.down_jumps}) {
        if (!stream->active()) {
            continue;
        }
        result += stream->rate * (expected_landing_value(*stream, v, spec.interval, x, policy) - vx);
    }
    return result;
}

Derivatives central_differences(const std::function<double(double)>& f, double x, double h) {
    const double fp = f(x + h);
    const double f0 = f(x);
    const double fm = f(x - h);
    return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

double apply_generator(const ProcessSpec& spec, const Candidate& v, double x,
                       const GeneratorOptions& options) {
    Derivatives d{};
    if (v.d1 && v.d2 && !options.force_finite_differences) {
        d = {v.d1(x), v.d2(x)};
    } else {
        d = central_differences(v.value, x, options.fd_step_fraction * spec.interval.length());
    }
    return 0.5 * spec.diffusion.squared(x) * d.d2 + spec.drift(x) * d.d1 +
           nonlocal_term(spec, v, x, options.policy);
}

bool overshoot_possible(const ProcessSpec& spec, double x) {
    for (const JumpStream* stream : {&spec.up_jumps, &spec.down_jumps}) {
        if (!stream->active()) {
            continue;
        }
        const auto [lo, hi] = stream->kernel.jump_range(x);
        if (x + hi > spec.interval.b || x + lo < spec.interval.a) {
            return true;
        }
    }
    return false;
}

double ResidualProfile::max_abs() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
}

double ResidualProfile::max_abs_overshoot_free() const {
    double m = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        if (!overshoot[i]) m = std::max(m, std::abs(residual[i]));
    }
    return m;
}

std::size_t ResidualProfile::overshoot_free_count() const {
    return static_cast<std::size_t>(std::count(overshoot.begin(), overshoot.end(), false));
}

void ResidualProfile::write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "x,residual,overshoot_flag\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        os << x[i] << ',' << residual[i] << ',' << (overshoot[i] ? 1 : 0) << '\n';
    }
    os.precision(old);
}

ResidualProfile residual_profile(const ProcessSpec& spec, const Candidate& v,
                                 std::size_t n_points, const GeneratorOptions& options) {
    if (n_points < 2) {
        throw InvalidParameter("residual_profile needs n_points >= 2");
    }
    ResidualProfile profile;
    profile.policy = options.policy;
    profile.x.resize(n_points);
    profile.residual.resize(n_points);
    profile.overshoot.resize(n_points);
    const double h = spec.interval.length() / static_cast<double>(n_points + 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double x = spec.interval.a + static_cast<double>(i + 1) * h;
        profile.x[i] = x;
        profile.residual[i] = apply_generator(spec, v, x, options);
        profile.overshoot[i] = overshoot_possible(spec, x);
    }
    return profile;
}

}  // namespace fpp
