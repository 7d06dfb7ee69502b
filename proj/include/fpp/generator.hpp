#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "fpp/closed_forms.hpp"
#include "fpp/model.hpp"

namespace fpp {

/// How a candidate is evaluated where jumps land outside (a, b).
enum class ExtensionPolicy {
    OuterConditions,        // 1 left of a, 0 right of b
    AnalyticContinuation,   // the candidate's own formula
};

const char* to_string(ExtensionPolicy policy);

/// Function to which the generator is applied. `d1`/`d2` are optional
/// exact derivatives; without them central differences are used.
struct Candidate {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;

    static Candidate from_closed_form(const ClosedFormPia& pia);
};

struct GeneratorOptions {
    ExtensionPolicy policy = ExtensionPolicy::OuterConditions;
    /// Finite-difference step as a fraction of b - a.
    double fd_step_fraction = 1e-5;
    /// Ignore exact derivatives even when the candidate has them.
    bool force_finite_differences = false;
};

/// lambda1 E[v(x + eps) - v(x)] + lambda2 E[v(x + delta) - v(x)].
double nonlocal_term(const ProcessSpec& spec, const Candidate& v, double x,
                     ExtensionPolicy policy);

/// 1/2 sigma^2 v'' + mu v' + nonlocal_term.
double apply_generator(const ProcessSpec& spec, const Candidate& v, double x,
                       const GeneratorOptions& options = {});

struct Derivatives {
    double d1;
    double d2;
};

/// Central differences with step h.
Derivatives central_differences(const std::function<double(double)>& f, double x, double h);

/// True when some jump from x can land outside the open interval.
bool overshoot_possible(const ProcessSpec& spec, double x);

struct ResidualProfile {
    std::vector<double> x;
    std::vector<double> residual;
    std::vector<bool> overshoot;
    ExtensionPolicy policy = ExtensionPolicy::OuterConditions;

    double max_abs() const;
    /// Max |residual| over nodes without overshoot (0 if there are none).
    double max_abs_overshoot_free() const;
    std::size_t overshoot_free_count() const;

    /// Columns: x,residual,overshoot_flag
    void write_csv(std::ostream& os) const;
};

/// Residuals at n_points equispaced interior nodes a + i (b - a)/(n + 1).
ResidualProfile residual_profile(const ProcessSpec& spec, const Candidate& v,
                                 std::size_t n_points, const GeneratorOptions& options = {});

}  // namespace fpp
