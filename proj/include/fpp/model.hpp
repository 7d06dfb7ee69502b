#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fpp {

/// Raised when a domain type is constructed with parameters that violate its
/// invariants. The message names the failed invariant.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Open interval (a, b) the process has to leave.
struct Interval {
    double a = 0.0;
    double b = 1.0;

    Interval() = default;
    Interval(double left, double right);

    double length() const { return b - a; }
    bool contains(double x) const { return x > a && x < b; }
};

enum class KernelKind {
    UniformProportionalUp,    // uniform on (0, alpha1 * xi)
    UniformProportionalDown,  // uniform on (-alpha2 * xi, 0)
    FixedUp,                  // point mass at +eps_bar
    FixedDown,                // point mass at -delta_bar
};

/// Distribution of a single jump, possibly depending on the pre-jump state.
class JumpKernel {
public:
    JumpKernel() = default;

    static JumpKernel uniform_proportional_up(double alpha1);
    static JumpKernel uniform_proportional_down(double alpha2);
    static JumpKernel fixed_up(double eps_bar);
    static JumpKernel fixed_down(double delta_bar);

    KernelKind kind() const { return kind_; }
    double parameter() const { return param_; }

    bool is_point_mass() const {
        return kind_ == KernelKind::FixedUp || kind_ == KernelKind::FixedDown;
    }
    bool is_upward() const {
        return kind_ == KernelKind::UniformProportionalUp || kind_ == KernelKind::FixedUp;
    }

    /// Range [lo, hi] of the jump size at pre-jump state `state`; lo == hi
    /// for point masses. Proportional kernels use max(state, 0).
    std::pair<double, double> jump_range(double state) const;

    /// Inverse-CDF draw from a uniform variate u in [0, 1).
    double sample(double state, double u) const;

    std::string describe() const;

private:
    JumpKernel(KernelKind kind, double param) : kind_(kind), param_(param) {}

    KernelKind kind_ = KernelKind::FixedUp;
    double param_ = 1.0;
};

/// Compound-Poisson jump stream; rate 0 means the stream is absent.
struct JumpStream {
    double rate = 0.0;
    JumpKernel kernel;

    bool active() const { return rate > 0.0; }
};

enum class CoefficientKind {
    Constant,
    Linear,
    ScaledX,        // c * x
    SqrtX,          // sqrt(x v 0)
    SqrtX1mX,       // sqrt(x (1 - x) v 0)
    CosineDrift,    // -(pi / 4) cos(pi x / 2)
    SqrtSinHalfPi,  // sqrt(sin(pi x / 2) v 0)
    Custom,
};

/// Drift or diffusion coefficient with a symbolic tag. The tag lets
/// consumers serialize the field and exploit exact structure.
class CoefficientField {
public:
    CoefficientField() = default;  // the constant 0

    static CoefficientField constant(double c);
    static CoefficientField linear(double slope, double intercept);
    static CoefficientField scaled_x(double c);
    static CoefficientField sqrt_x();
    static CoefficientField sqrt_x1mx();
    static CoefficientField cosine_drift();
    static CoefficientField sqrt_sin_half_pi();
    static CoefficientField custom(std::string name, std::function<double(double)> fn);

    double operator()(double x) const;

    /// Square of the coefficient with negative radicands clamped to zero.
    double squared(double x) const;

    CoefficientKind kind() const { return kind_; }
    double slope() const { return p0_; }
    double intercept() const { return p1_; }
    const std::string& name() const { return name_; }

    std::string describe() const;

private:
    CoefficientKind kind_ = CoefficientKind::Constant;
    double p0_ = 0.0;
    double p1_ = 0.0;
    std::string name_;
    std::function<double(double)> custom_;
};

/// Jump-diffusion dX = mu(X) dt + sigma(X) dB + up jumps + down jumps,
/// observed until it leaves `interval`.
struct ProcessSpec {
    CoefficientField drift;
    CoefficientField diffusion;
    JumpStream up_jumps;
    JumpStream down_jumps;
    Interval interval;
    std::string label;

    bool has_jumps() const { return up_jumps.active() || down_jumps.active(); }

    /// Throws InvalidParameter on stream/kernel direction mismatch, negative
    /// rates, or non-finite coefficients on [a, b].
    void validate() const;
};

enum class DensityKind { Beta, ModifiedBeta, Uniform, Tabulated };

/// Parametric (or tabulated) density of the random starting point.
class DensitySpec {
public:
    static DensitySpec beta(double alpha, double beta);
    static DensitySpec modified_beta(double alpha, double beta, double a, double b);
    static DensitySpec uniform(double a, double b);
    /// Linear interpolation between nodes. Renormalized when the integral is
    /// off by more than 1e-10 but less than 1e-3, rejected beyond that.
    static DensitySpec tabulated(std::vector<double> x, std::vector<double> g);

    DensityKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta_param() const { return beta_; }
    Interval support() const { return support_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> node_values() const { return values_; }

    double pdf(double x) const;
    /// Same, with the caller supplying x - a and b - x (accurate next to the
    /// ends where the Beta factors are singular).
    double pdf(double x, double from_a, double to_b) const;
    double mean() const;

    /// Points in the support where the pdf is not smooth (endpoints and
    /// tabulation nodes); quadrature splits there.
    std::vector<double> breakpoints() const;

    std::string describe() const;

private:
    DensitySpec() = default;

    DensityKind kind_ = DensityKind::Uniform;
    double alpha_ = 1.0;
    double beta_ = 1.0;
    double log_norm_ = 0.0;
    Interval support_;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// Parameters of the seven worked examples. Only the fields relevant to
/// `example_id` are read by `build_example`.
struct ExampleParams {
    int example_id = 1;
    double a = 0.0;
    double b = 1.0;
    double gamma = 2.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double eps_bar = 0.1;
    double delta_bar = 0.1;
    double epsilon = 0.5;
    int variant = 1;  // Example 4: 1 = two-sided fixed jumps, 2 = up jumps only
    CoefficientField sigma = CoefficientField::constant(1.0);  // Examples 1 and 4

    void validate() const;
};

/// Defaults used by the catalog and CLI for a given example.
ExampleParams default_example_params(int example_id);

/// Linear drift constants shared by Examples 2 and 3.
struct PowerDriftConstants {
    double A;
    double B;
    double A_prime;
};

PowerDriftConstants power_drift_constants(double gamma, double lambda1, double alpha1,
                                          double lambda2, double alpha2);

/// Builds the ProcessSpec of worked example `id` (1..7). Interval is (0,1)
/// for Examples 2, 3, 5, 6, (0, 2 epsilon) for Example 7 and (a, b) from
/// the parameters for Examples 1 and 4.
ProcessSpec build_example(int id, const ExampleParams& params);

// JSON presets. Field names: drift, diffusion, up_rate, up_kernel,
// down_rate, down_kernel, a, b.
nlohmann::json to_json(const CoefficientField& field);
nlohmann::json to_json(const JumpKernel& kernel);
nlohmann::json to_json(const ProcessSpec& spec);
nlohmann::json to_json(const DensitySpec& density);

CoefficientField coefficient_from_json(const nlohmann::json& j);
JumpKernel kernel_from_json(const nlohmann::json& j);
ProcessSpec process_from_json(const nlohmann::json& j);
DensitySpec density_from_json(const nlohmann::json& j);

}  // namespace fpp
