#pragma once

#include "fpp/model.hpp"
#include "fpp/special_functions.hpp"

namespace fpp {

/// Constants of the Example 7 exit probability
///   x in (0, eps):    e^{-x sqrt2} (A + a x) + e^{x sqrt2} (B + b x)
///   x in [eps, 2eps): c (e^{-x sqrt2} - e^{-4 eps sqrt2 + x sqrt2})
/// with a = c e^{-eps sqrt2}/sqrt2, b = c e^{-3 eps sqrt2}/sqrt2, B = 1 - A and
/// A, c fixed by C1 matching at x = eps through
///   alpha A + beta c = -e^{eps sqrt2},  gamma A + delta c = -sqrt2 e^{eps sqrt2}.
struct Example7Constants {
    double epsilon;
    double a_c;
    double b_c;
    double c;
    double A;
    double B;
    double alpha_c;
    double beta_c;
    double gamma_c;
    double delta_c;

    double determinant() const { return alpha_c * delta_c - beta_c * gamma_c; }
};

/// Constants that make the piecewise form solve the Example 7 problem
/// (C2 at eps, zero residual on both branches).
Example7Constants example7_constants(double epsilon);

/// The constants exactly as transcribed in the source of Example 7:
/// b carries a minus sign and beta, delta change accordingly. The resulting
/// function is C1 but not C2 and does not satisfy the equation on (0, eps).
/// Kept for reporting only.
Example7Constants example7_constants_as_printed(double epsilon);

/// The transcribed closed-form q of Example 7 for the uniform density on
/// (0, 2 eps), evaluated with the given constants.
double example7_q_transcribed(const Example7Constants& k);

double example7_pi(const Example7Constants& k, double x);
double example7_pi_d1(const Example7Constants& k, double x);
double example7_pi_d2(const Example7Constants& k, double x);

enum class ClosedFormMode {
    Outer,     // 1 for x <= a, 0 for x >= b
    Analytic,  // the formula itself, continued outside (a, b)
};

/// Closed-form left-exit probability of a catalog example.
class ClosedFormPia {
public:
    explicit ClosedFormPia(const ExampleParams& params);

    const ExampleParams& params() const { return params_; }
    Interval interval() const { return interval_; }

    double operator()(double x, ClosedFormMode mode = ClosedFormMode::Outer) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    std::string formula() const;

private:
    double analytic(double x) const;

    ExampleParams params_;
    Interval interval_;
    Example7Constants k7_{};
};

/// Closed-form pi_a(x) for the example described by `params`.
double pia_closed(const ExampleParams& params, double x,
                  ClosedFormMode mode = ClosedFormMode::Outer);

/// Closed-form q = int g pi_a for the density each example pairs with:
/// Examples 1 and 4 with ModifiedBeta on (a, b) (or Uniform(a, b)),
/// 2 and 3 with Beta, 5 with Beta, 6 with Uniform(0, 1), 7 with
/// Uniform(0, 2 eps). Example 7 returns the transcribed formula value.
/// Throws InvalidParameter for other pairings.
double q_closed(const ExampleParams& params, const DensitySpec& density);

/// q for Example 2/3 with gamma = 2 in the rational form
/// beta (beta + 2 alpha + 1) / ((alpha + beta)(alpha + beta + 1)).
double q_power2_rational(double alpha, double beta);

/// (a beta + b alpha) / (alpha + beta).
double modified_beta_mean(double alpha, double beta, double a, double b);

/// Human-readable q formula for the catalog.
std::string q_formula(int example_id);

}  // namespace fpp
