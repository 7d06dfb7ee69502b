#include "fpp/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

Example7Constants solve_example7(double eps, double beta, double delta, double b_sign) {
    if (!(eps > 0.0)) {
        throw InvalidParameter("epsilon > 0 violated");
    }
    const double s = kSqrt2;
    Example7Constants k{};
    k.epsilon = eps;
    k.alpha_c = -2.0 * std::sinh(eps * s);
    k.beta_c = beta;
    k.gamma_c = -2.0 * s * std::cosh(eps * s);
    k.delta_c = delta;
    const double det = k.determinant();
    const double scale = std::abs(k.alpha_c * k.delta_c) + std::abs(k.beta_c * k.gamma_c);
    if (!(std::abs(det) > 1e-14 * scale)) {
        throw std::runtime_error("Example 7: alpha*delta - beta*gamma is numerically zero");
    }
    const double e = std::exp(eps * s);
    k.A = e * (k.beta_c * s - k.delta_c) / det;
    k.c = e * (k.gamma_c - k.alpha_c * s) / det;
    k.B = 1.0 - k.A;
    k.a_c = k.c * std::exp(-eps * s) / s;
    k.b_c = b_sign * k.c * std::exp(-3.0 * eps * s) / s;
    return k;
}

}  // namespace

Example7Constants example7_constants(double eps) {
    const double s = kSqrt2;
    const double e1 = std::exp(-eps * s);
    const double e2 = std::exp(-2.0 * eps * s);
    const double e3 = std::exp(-3.0 * eps * s);
    const double beta = s * eps * e2 + e1 * (e2 - 1.0);
    const double delta = s * e2 + s * (e1 + e3);
    return solve_example7(eps, beta, delta, +1.0);
}

Example7Constants example7_constants_as_printed(double eps) {
    const double s = kSqrt2;
    const double e1 = std::exp(-eps * s);
    const double e2 = std::exp(-2.0 * eps * s);
    const double e3 = std::exp(-3.0 * eps * s);
    const double beta = e1 * (e2 - 1.0);
    const double delta = -2.0 * eps * e2 + s * (e1 + e3);
    return solve_example7(eps, beta, delta, -1.0);
}

double example7_q_transcribed(const Example7Constants& k) {
    const double s = kSqrt2;
    const double eps = k.epsilon;
    const double den = k.determinant();
    const double ga_al = k.gamma_c - k.alpha_c * s;
    const double be_de = k.beta_c * s - k.delta_c;
    const double e = std::exp(eps * s);
    const double pre = 1.0 / (2.0 * eps * s);
    const double t1 = (k.gamma_c - (k.alpha_c + k.beta_c) * s + k.delta_c) / den +
                      e * (1.0 - e * be_de / den);
    const double t2 = s * std::exp(-eps * s) * (s - eps - 0.25) * ga_al / den;
    const double t3 = std::exp(-2.0 * eps * s) * ga_al / den + 2.0 * e * be_de / den +
                      ga_al / (2.0 * den) - 1.0;
    return pre * (t1 + t2 + t3);
}

double example7_pi(const Example7Constants& k, double x) {
    const double s = kSqrt2;
    if (x < k.epsilon) {
        return std::exp(-x * s) * (k.A + k.a_c * x) + std::exp(x * s) * (k.B + k.b_c * x);
    }
    return k.c * (std::exp(-x * s) - std::exp(-4.0 * k.epsilon * s + x * s));
}

double example7_pi_d1(const Example7Constants& k, double x) {
    const double s = kSqrt2;
    if (x < k.epsilon) {
        return std::exp(-x * s) * (k.a_c - s * (k.A + k.a_c * x)) +
               std::exp(x * s) * (k.b_c + s * (k.B + k.b_c * x));
    }
    return -s * k.c * (std::exp(-x * s) + std::exp(-4.0 * k.epsilon * s + x * s));
}

double example7_pi_d2(const Example7Constants& k, double x) {
    const double s = kSqrt2;
    if (x < k.epsilon) {
        return std::exp(-x * s) * (-2.0 * s * k.a_c + 2.0 * (k.A + k.a_c * x)) +
               std::exp(x * s) * (2.0 * s * k.b_c + 2.0 * (k.B + k.b_c * x));
    }
    return 2.0 * k.c * (std::exp(-x * s) - std::exp(-4.0 * k.epsilon * s + x * s));
}

// ---------------------------------------------------------------------------

ClosedFormPia::ClosedFormPia(const ExampleParams& params) : params_(params) {
    params_.validate();
    interval_ = build_example(params_.example_id, params_).interval;
    if (params_.example_id == 7) {
        k7_ = example7_constants(params_.epsilon);
    }
}

double ClosedFormPia::analytic(double x) const {
    const double a = interval_.a;
    const double b = interval_.b;
    switch (params_.example_id) {
        case 1:
        case 4: return (b - x) / (b - a);
        case 2:
        case 3: return 1.0 - std::pow(x, params_.gamma);
        case 5: return 2.0 - std::exp2(x);
        case 6: return std::cos(kHalfPi * x);
        case 7: return example7_pi(k7_, x);
    }
    return 0.0;
}

double ClosedFormPia::operator()(double x, ClosedFormMode mode) const {
    if (mode == ClosedFormMode::Outer) {
        if (x <= interval_.a) return 1.0;
        if (x >= interval_.b) return 0.0;
    }
    return analytic(x);
}

double ClosedFormPia::derivative(double x) const {
    switch (params_.example_id) {
        case 1:
        case 4: return -1.0 / interval_.length();
        case 2:
        case 3: return -params_.gamma * std::pow(x, params_.gamma - 1.0);
        case 5: return -std::numbers::ln2 * std::exp2(x);
        case 6: return -kHalfPi * std::sin(kHalfPi * x);
        case 7: return example7_pi_d1(k7_, x);
    }
    return 0.0;
}

double ClosedFormPia::second_derivative(double x) const {
    const double g = params_.gamma;
    switch (params_.example_id) {
        case 1:
        case 4: return 0.0;
        case 2:
        case 3: return -g * (g - 1.0) * std::pow(x, g - 2.0);
        case 5: return -std::numbers::ln2 * std::numbers::ln2 * std::exp2(x);
        case 6: return -kHalfPi * kHalfPi * std::cos(kHalfPi * x);
        case 7: return example7_pi_d2(k7_, x);
    }
    return 0.0;
}

std::string ClosedFormPia::formula() const {
    std::ostringstream os;
    switch (params_.example_id) {
        case 1:
        case 4: os << "(b - x)/(b - a)"; break;
        case 2:
        case 3: os << "1 - x^" << params_.gamma; break;
        case 5: os << "2 - 2^x"; break;
        case 6: os << "cos(pi x / 2)"; break;
        case 7:
            os << "e^{-x sqrt2}(A + a x) + e^{x sqrt2}(B + b x) on (0, eps); "
                  "c (e^{-x sqrt2} - e^{-4 eps sqrt2 + x sqrt2}) on [eps, 2 eps)";
            break;
    }
    return os.str();
}

double pia_closed(const ExampleParams& params, double x, ClosedFormMode mode) {
    return ClosedFormPia(params)(x, mode);
}

// ---------------------------------------------------------------------------

namespace {

bool same_support(Interval s, Interval t) {
    const double tol = 1e-12 * std::max(1.0, std::abs(t.a) + std::abs(t.b));
    return std::abs(s.a - t.a) <= tol && std::abs(s.b - t.b) <= tol;
}

struct BetaPair {
    double alpha;
    double beta;
};

// Uniform densities count as Beta(1, 1) on their support.
std::optional<BetaPair> beta_on(const DensitySpec& g, Interval support) {
    if (!same_support(g.support(), support)) {
        return std::nullopt;
    }
    switch (g.kind()) {
        case DensityKind::Uniform: return BetaPair{1.0, 1.0};
        case DensityKind::Beta:
        case DensityKind::ModifiedBeta: return BetaPair{g.alpha(), g.beta_param()};
        case DensityKind::Tabulated: return std::nullopt;
    }
    return std::nullopt;
}

[[noreturn]] void unsupported(int id, const DensitySpec& g) {
    throw InvalidParameter("no closed-form q for example " + std::to_string(id) + " with " +
                           g.describe());
}

}  // namespace

double q_closed(const ExampleParams& params, const DensitySpec& density) {
    params.validate();
    const Interval support = build_example(params.example_id, params).interval;
    const auto bp = beta_on(density, support);
    if (!bp) {
        unsupported(params.example_id, density);
    }
    switch (params.example_id) {
        case 1:
        case 4: return bp->beta / (bp->alpha + bp->beta);
        case 2:
        case 3: return 1.0 - beta_moment(bp->alpha, bp->beta, params.gamma);
        case 5: return 2.0 - beta_mgf(bp->alpha, bp->beta, std::numbers::ln2);
        case 6:
            if (bp->alpha != 1.0 || bp->beta != 1.0) unsupported(6, density);
            return 2.0 / std::numbers::pi;
        case 7:
            if (bp->alpha != 1.0 || bp->beta != 1.0) unsupported(7, density);
            return example7_q_transcribed(example7_constants_as_printed(params.epsilon));
    }
    unsupported(params.example_id, density);
}

double q_power2_rational(double alpha, double beta) {
    return beta * (beta + 2.0 * alpha + 1.0) / ((alpha + beta) * (alpha + beta + 1.0));
}

double modified_beta_mean(double alpha, double beta, double a, double b) {
    if (!(alpha > 0.0 && beta > 0.0)) {
        throw std::domain_error("modified_beta_mean: alpha, beta must be positive");
    }
    if (!(a < b)) {
        throw std::domain_error("modified_beta_mean: a < b required");
    }
    return (a * beta + b * alpha) / (alpha + beta);
}

std::string q_formula(int example_id) {
    switch (example_id) {
        case 1:
        case 4: return "beta / (alpha + beta)  [modified Beta on (a, b)]";
        case 2:
        case 3:
            return "1 - Gamma(alpha+gamma) Gamma(alpha+beta) / (Gamma(alpha) Gamma(alpha+beta+gamma))"
                   "  [Beta on (0, 1)]";
        case 5: return "2 - sum_k (ln 2)^k / k! * B(alpha+k, beta) / B(alpha, beta)  [Beta on (0, 1)]";
        case 6: return "2 / pi  [uniform on (0, 1)]";
        case 7: return "(1 / 2eps) int_0^{2eps} pi_0(x) dx  [uniform on (0, 2 eps)]";
    }
    throw InvalidParameter("unknown example id " + std::to_string(example_id));
}

}  // namespace fpp
