#include "fpp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fpp/special_functions.hpp"

namespace fpp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw InvalidParameter(message);
    }
}

}  // namespace

Interval::Interval(double left, double right) : a(left), b(right) {
    require(std::isfinite(left) && std::isfinite(right) && left < right,
            "interval requires a < b (got a=" + fmt(left) + ", b=" + fmt(right) + ")");
}

// ---------------------------------------------------------------------------
// JumpKernel

JumpKernel JumpKernel::uniform_proportional_up(double alpha1) {
    require(alpha1 > 0.0, "alpha1 > 0 violated (alpha1=" + fmt(alpha1) + ")");
    return {KernelKind::UniformProportionalUp, alpha1};
}

JumpKernel JumpKernel::uniform_proportional_down(double alpha2) {
    require(alpha2 > 0.0 && alpha2 <= 1.0,
            "0 < alpha2 <= 1 violated (alpha2=" + fmt(alpha2) + ")");
    return {KernelKind::UniformProportionalDown, alpha2};
}

JumpKernel JumpKernel::fixed_up(double eps_bar) {
    require(eps_bar > 0.0, "eps_bar > 0 violated (eps_bar=" + fmt(eps_bar) + ")");
    return {KernelKind::FixedUp, eps_bar};
}

JumpKernel JumpKernel::fixed_down(double delta_bar) {
    require(delta_bar > 0.0, "delta_bar > 0 violated (delta_bar=" + fmt(delta_bar) + ")");
    return {KernelKind::FixedDown, delta_bar};
}

std::pair<double, double> JumpKernel::jump_range(double state) const {
    const double xi = std::max(state, 0.0);
    switch (kind_) {
        case KernelKind::UniformProportionalUp: return {0.0, param_ * xi};
        case KernelKind::UniformProportionalDown: return {-param_ * xi, 0.0};
        case KernelKind::FixedUp: return {param_, param_};
        case KernelKind::FixedDown: return {-param_, -param_};
    }
    return {0.0, 0.0};
}

double JumpKernel::sample(double state, double u) const {
    const auto [lo, hi] = jump_range(state);
    return lo + (hi - lo) * u;
}

std::string JumpKernel::describe() const {
    switch (kind_) {
        case KernelKind::UniformProportionalUp:
            return "uniform on (0, " + fmt(param_) + " * x)";
        case KernelKind::UniformProportionalDown:
            return "uniform on (-" + fmt(param_) + " * x, 0)";
        case KernelKind::FixedUp: return "fixed +" + fmt(param_);
        case KernelKind::FixedDown: return "fixed -" + fmt(param_);
    }
    return {};
}

// ---------------------------------------------------------------------------
// CoefficientField

CoefficientField CoefficientField::constant(double c) {
    CoefficientField f;
    f.kind_ = CoefficientKind::Constant;
    f.p0_ = 0.0;
    f.p1_ = c;
    return f;
}

CoefficientField CoefficientField::linear(double slope, double intercept) {
    CoefficientField f = constant(intercept);
    f.kind_ = CoefficientKind::Linear;
    f.p0_ = slope;
    return f;
}

CoefficientField CoefficientField::scaled_x(double c) {
    CoefficientField f = constant(0.0);
    f.kind_ = CoefficientKind::ScaledX;
    f.p0_ = c;
    return f;
}

CoefficientField CoefficientField::sqrt_x() {
    CoefficientField f = constant(0.0);
    f.kind_ = CoefficientKind::SqrtX;
    return f;
}

CoefficientField CoefficientField::sqrt_x1mx() {
    CoefficientField f = constant(0.0);
    f.kind_ = CoefficientKind::SqrtX1mX;
    return f;
}

CoefficientField CoefficientField::cosine_drift() {
    CoefficientField f = constant(0.0);
    f.kind_ = CoefficientKind::CosineDrift;
    return f;
}

CoefficientField CoefficientField::sqrt_sin_half_pi() {
    CoefficientField f = constant(0.0);
    f.kind_ = CoefficientKind::SqrtSinHalfPi;
    return f;
}

CoefficientField CoefficientField::custom(std::string name, std::function<double(double)> fn) {
    require(static_cast<bool>(fn), "custom coefficient needs a callable");
    CoefficientField f = constant(0.0);
    f.kind_ = CoefficientKind::Custom;
    f.name_ = std::move(name);
    f.custom_ = std::move(fn);
    return f;
}

double CoefficientField::operator()(double x) const {
    constexpr double half_pi = 0.5 * std::numbers::pi;
    switch (kind_) {
        case CoefficientKind::Constant: return p1_;
        case CoefficientKind::Linear: return p0_ * x + p1_;
        case CoefficientKind::ScaledX: return p0_ * x;
        case CoefficientKind::SqrtX: return std::sqrt(std::max(x, 0.0));
        case CoefficientKind::SqrtX1mX: return std::sqrt(std::max(x * (1.0 - x), 0.0));
        case CoefficientKind::CosineDrift: return -0.25 * std::numbers::pi * std::cos(half_pi * x);
        case CoefficientKind::SqrtSinHalfPi: return std::sqrt(std::max(std::sin(half_pi * x), 0.0));
        case CoefficientKind::Custom: return custom_(x);
    }
    return 0.0;
}

double CoefficientField::squared(double x) const {
    switch (kind_) {
        case CoefficientKind::SqrtX: return std::max(x, 0.0);
        case CoefficientKind::SqrtX1mX: return std::max(x * (1.0 - x), 0.0);
        case CoefficientKind::SqrtSinHalfPi:
            return std::max(std::sin(0.5 * std::numbers::pi * x), 0.0);
        default: {
            const double v = (*this)(x);
            return v * v;
        }
    }
}

std::string CoefficientField::describe() const {
    switch (kind_) {
        case CoefficientKind::Constant: return fmt(p1_);
        case CoefficientKind::Linear: return fmt(p0_) + " * x + " + fmt(p1_);
        case CoefficientKind::ScaledX: return fmt(p0_) + " * x";
        case CoefficientKind::SqrtX: return "sqrt(x v 0)";
        case CoefficientKind::SqrtX1mX: return "sqrt(x (1 - x) v 0)";
        case CoefficientKind::CosineDrift: return "-(pi/4) cos(pi x / 2)";
        case CoefficientKind::SqrtSinHalfPi: return "sqrt(sin(pi x / 2) v 0)";
        case CoefficientKind::Custom: return name_;
    }
    return {};
}

void ProcessSpec::validate() const {
    require(up_jumps.rate >= 0.0 && down_jumps.rate >= 0.0, "jump rates must be >= 0");
    require(!up_jumps.active() || up_jumps.kernel.is_upward(),
            "up_jumps stream needs an upward kernel");
    require(!down_jumps.active() || !down_jumps.kernel.is_upward(),
            "down_jumps stream needs a downward kernel");
    const auto proportional = [](const JumpStream& s) {
        return s.active() && !s.kernel.is_point_mass();
    };
    require(!(proportional(up_jumps) || proportional(down_jumps)) || interval.a >= 0.0,
            "state-proportional kernels need a >= 0");
    constexpr int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double x = interval.a + interval.length() * i / samples;
        require(std::isfinite(drift(x)), "drift not finite at x=" + fmt(x));
        const double s2 = diffusion.squared(x);
        require(std::isfinite(s2) && s2 >= 0.0, "sigma^2 invalid at x=" + fmt(x));
    }
}

// ---------------------------------------------------------------------------
// DensitySpec

DensitySpec DensitySpec::beta(double alpha, double beta) {
    DensitySpec d = modified_beta(alpha, beta, 0.0, 1.0);
    d.kind_ = DensityKind::Beta;
    return d;
}

DensitySpec DensitySpec::modified_beta(double alpha, double beta, double a, double b) {
    require(alpha > 0.0 && beta > 0.0,
            "Beta parameters must be positive (alpha=" + fmt(alpha) + ", beta=" + fmt(beta) + ")");
    DensitySpec d;
    d.kind_ = DensityKind::ModifiedBeta;
    d.alpha_ = alpha;
    d.beta_ = beta;
    d.support_ = Interval(a, b);
    d.log_norm_ = -log_beta_function(alpha, beta) - (alpha + beta - 1.0) * std::log(b - a);
    return d;
}

DensitySpec DensitySpec::uniform(double a, double b) {
    DensitySpec d;
    d.kind_ = DensityKind::Uniform;
    d.support_ = Interval(a, b);
    return d;
}

DensitySpec DensitySpec::tabulated(std::vector<double> x, std::vector<double> g) {
    require(x.size() == g.size() && x.size() >= 2, "tabulated density needs >= 2 (x, g) pairs");
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(std::isfinite(x[i]) && std::isfinite(g[i]), "tabulated density has non-finite entry");
        require(g[i] >= 0.0, "tabulated density must be nonnegative");
        if (i > 0) {
            require(x[i] > x[i - 1], "tabulated nodes must be strictly increasing");
        }
    }
    // Trapezoid rule is exact for the piecewise-linear interpolant.
    double mass = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        mass += 0.5 * (g[i] + g[i - 1]) * (x[i] - x[i - 1]);
    }
    const double deviation = std::abs(mass - 1.0);
    require(deviation < 1e-3, "tabulated density integrates to " + fmt(mass) + ", not 1");
    if (deviation > 1e-10) {
        for (double& v : g) {
            v /= mass;
        }
    }
    DensitySpec d;
    d.kind_ = DensityKind::Tabulated;
    d.support_ = Interval(x.front(), x.back());
    d.nodes_ = std::move(x);
    d.values_ = std::move(g);
    return d;
}

double DensitySpec::pdf(double x) const {
    if (!(x > support_.a && x < support_.b)) {
        return 0.0;
    }
    switch (kind_) {
        case DensityKind::Uniform: return 1.0 / support_.length();
        case DensityKind::Beta:
        case DensityKind::ModifiedBeta:
            return std::exp(log_norm_ + (alpha_ - 1.0) * std::log(x - support_.a) +
                            (beta_ - 1.0) * std::log(support_.b - x));
        case DensityKind::Tabulated: {
            const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
            const double w = (x - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
            return (1.0 - w) * values_[j - 1] + w * values_[j];
        }
    }
    return 0.0;
}

double DensitySpec::pdf(double x, double from_a, double to_b) const {
    if (kind_ != DensityKind::Beta && kind_ != DensityKind::ModifiedBeta) {
        return pdf(x);
    }
    if (!(from_a > 0.0 && to_b > 0.0)) {
        return 0.0;
    }
    return std::exp(log_norm_ + (alpha_ - 1.0) * std::log(from_a) + (beta_ - 1.0) * std::log(to_b));
}

double DensitySpec::mean() const {
    switch (kind_) {
        case DensityKind::Uniform: return 0.5 * (support_.a + support_.b);
        case DensityKind::Beta:
        case DensityKind::ModifiedBeta:
            return (support_.a * beta_ + support_.b * alpha_) / (alpha_ + beta_);
        case DensityKind::Tabulated: {
            // exact for linear pieces: int x (g0 + s (x - x0)) dx
            double m = 0.0;
            for (std::size_t i = 1; i < nodes_.size(); ++i) {
                const double x0 = nodes_[i - 1], x1 = nodes_[i];
                const double g0 = values_[i - 1], g1 = values_[i];
                m += (x1 - x0) * (g0 * (2.0 * x0 + x1) + g1 * (x0 + 2.0 * x1)) / 6.0;
            }
            return m;
        }
    }
    return 0.0;
}

std::vector<double> DensitySpec::breakpoints() const {
    if (kind_ == DensityKind::Tabulated) {
        return nodes_;
    }
    return {support_.a, support_.b};
}

std::string DensitySpec::describe() const {
    switch (kind_) {
        case DensityKind::Beta: return "Beta(" + fmt(alpha_) + ", " + fmt(beta_) + ")";
        case DensityKind::ModifiedBeta:
            return "ModifiedBeta(" + fmt(alpha_) + ", " + fmt(beta_) + ") on (" + fmt(support_.a) +
                   ", " + fmt(support_.b) + ")";
        case DensityKind::Uniform:
            return "Uniform(" + fmt(support_.a) + ", " + fmt(support_.b) + ")";
        case DensityKind::Tabulated:
            return "Tabulated(" + std::to_string(nodes_.size()) + " nodes)";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Example catalog

void ExampleParams::validate() const {
    require(example_id >= 1 && example_id <= 7,
            "unknown example id " + std::to_string(example_id) + " (expected 1..7)");
    require(lambda1 >= 0.0 && lambda2 >= 0.0, "jump rates must be >= 0");
    switch (example_id) {
        case 1:
            (void)Interval(a, b);
            require(a >= 0.0, "Example 1 needs a >= 0 (proportional kernels)");
            (void)JumpKernel::uniform_proportional_up(alpha1);
            (void)JumpKernel::uniform_proportional_down(alpha2);
            break;
        case 2:
        case 3:
            require(gamma > 0.0, "gamma > 0 violated (gamma=" + fmt(gamma) + ")");
            (void)JumpKernel::uniform_proportional_up(alpha1);
            (void)JumpKernel::uniform_proportional_down(alpha2);
            break;
        case 4:
            (void)Interval(a, b);
            require(variant == 1 || variant == 2, "Example 4 variant must be 1 or 2");
            (void)JumpKernel::fixed_up(eps_bar);
            if (variant == 1) {
                (void)JumpKernel::fixed_down(delta_bar);
            }
            break;
        case 5:
            (void)JumpKernel::fixed_up(eps_bar);
            (void)JumpKernel::fixed_down(delta_bar);
            break;
        case 6: break;
        case 7: require(epsilon > 0.0, "epsilon > 0 violated (epsilon=" + fmt(epsilon) + ")"); break;
    }
}

ExampleParams default_example_params(int example_id) {
    ExampleParams p;
    p.example_id = example_id;
    if (example_id == 6) {
        p.lambda2 = 0.0;
    }
    if (example_id == 7) {
        p.lambda1 = 1.0;
        p.lambda2 = 0.0;
    }
    p.validate();
    return p;
}

PowerDriftConstants power_drift_constants(double gamma, double lambda1, double alpha1,
                                          double lambda2, double alpha2) {
    require(gamma > 0.0, "gamma > 0 violated (gamma=" + fmt(gamma) + ")");
    const double gp1 = gamma + 1.0;
    const double up = lambda1 / alpha1 * (1.0 - std::pow(1.0 + alpha1, gp1));
    const double down = lambda2 / alpha2 * (std::pow(1.0 - alpha2, gp1) - 1.0);
    PowerDriftConstants c{};
    c.A = (lambda1 + lambda2 + (up + down) / gp1) / gamma;
    c.B = -0.5 * (gamma - 1.0);
    c.A_prime = 0.5 * (gamma - 1.0) + c.A;
    return c;
}

ProcessSpec build_example(int id, const ExampleParams& input) {
    ExampleParams p = input;
    p.example_id = id;
    p.validate();

    ProcessSpec spec;
    spec.label = "example " + std::to_string(id);
    const auto proportional_streams = [&] {
        spec.up_jumps = {p.lambda1, JumpKernel::uniform_proportional_up(p.alpha1)};
        spec.down_jumps = {p.lambda2, JumpKernel::uniform_proportional_down(p.alpha2)};
    };

    switch (id) {
        case 1:
            spec.interval = Interval(p.a, p.b);
            spec.drift = CoefficientField::linear(
                0.5 * (p.lambda2 * p.alpha2 - p.lambda1 * p.alpha1), 0.0);
            spec.diffusion = p.sigma;
            proportional_streams();
            break;
        case 2: {
            const auto c = power_drift_constants(p.gamma, p.lambda1, p.alpha1, p.lambda2, p.alpha2);
            spec.drift = CoefficientField::linear(c.A, c.B);
            spec.diffusion = CoefficientField::sqrt_x();
            proportional_streams();
            break;
        }
        case 3: {
            const auto c = power_drift_constants(p.gamma, p.lambda1, p.alpha1, p.lambda2, p.alpha2);
            spec.drift = CoefficientField::linear(c.A_prime, c.B);
            spec.diffusion = CoefficientField::sqrt_x1mx();
            proportional_streams();
            break;
        }
        case 4:
            spec.interval = Interval(p.a, p.b);
            spec.diffusion = p.sigma;
            spec.up_jumps = {p.lambda1, JumpKernel::fixed_up(p.eps_bar)};
            if (p.variant == 1) {
                spec.drift = CoefficientField::constant(p.delta_bar * p.lambda2 - p.eps_bar * p.lambda1);
                spec.down_jumps = {p.lambda2, JumpKernel::fixed_down(p.delta_bar)};
            } else {
                // Jump amplitude eps_bar, matching the verification equation's v(x + eps_bar).
                spec.drift = CoefficientField::constant(-p.eps_bar * p.lambda1);
                spec.down_jumps = {0.0, JumpKernel::fixed_down(1.0)};
            }
            break;
        case 5: {
            const double ln2 = std::numbers::ln2;
            const double shift = (-p.lambda1 * (std::exp2(p.eps_bar) - 1.0) +
                                  p.lambda2 * (1.0 - std::exp2(-p.delta_bar))) / ln2;
            spec.drift = CoefficientField::linear(-0.5 * ln2, shift);
            spec.diffusion = CoefficientField::sqrt_x();
            spec.up_jumps = {p.lambda1, JumpKernel::fixed_up(p.eps_bar)};
            spec.down_jumps = {p.lambda2, JumpKernel::fixed_down(p.delta_bar)};
            break;
        }
        case 6:
            spec.drift = CoefficientField::cosine_drift();
            spec.diffusion = CoefficientField::sqrt_sin_half_pi();
            spec.up_jumps = {p.lambda1, JumpKernel::fixed_up(4.0)};
            spec.down_jumps = {0.0, JumpKernel::fixed_down(1.0)};
            break;
        case 7:
            spec.interval = Interval(0.0, 2.0 * p.epsilon);
            spec.drift = CoefficientField::constant(0.0);
            spec.diffusion = CoefficientField::constant(1.0);
            spec.up_jumps = {1.0, JumpKernel::fixed_up(p.epsilon)};
            spec.down_jumps = {0.0, JumpKernel::fixed_down(1.0)};
            break;
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

json to_json(const CoefficientField& f) {
    switch (f.kind()) {
        case CoefficientKind::Constant: return {{"type", "constant"}, {"c", f.intercept()}};
        case CoefficientKind::Linear:
            return {{"type", "linear"}, {"slope", f.slope()}, {"intercept", f.intercept()}};
        case CoefficientKind::ScaledX: return {{"type", "scaled_x"}, {"c", f.slope()}};
        case CoefficientKind::SqrtX: return {{"type", "sqrt_x"}};
        case CoefficientKind::SqrtX1mX: return {{"type", "sqrt_x1mx"}};
        case CoefficientKind::CosineDrift: return {{"type", "cosine_drift"}};
        case CoefficientKind::SqrtSinHalfPi: return {{"type", "sqrt_sin_half_pi"}};
        case CoefficientKind::Custom:
            throw InvalidParameter("custom coefficient '" + f.name() + "' cannot be serialized");
    }
    return {};
}

CoefficientField coefficient_from_json(const json& j) {
    if (j.is_number()) {
        return CoefficientField::constant(j.get<double>());
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return CoefficientField::constant(j.at("c").get<double>());
    if (type == "linear") {
        return CoefficientField::linear(j.at("slope").get<double>(),
                                        j.value("intercept", 0.0));
    }
    if (type == "scaled_x") return CoefficientField::scaled_x(j.at("c").get<double>());
    if (type == "sqrt_x") return CoefficientField::sqrt_x();
    if (type == "sqrt_x1mx") return CoefficientField::sqrt_x1mx();
    if (type == "cosine_drift") return CoefficientField::cosine_drift();
    if (type == "sqrt_sin_half_pi") return CoefficientField::sqrt_sin_half_pi();
    throw InvalidParameter("unknown coefficient type '" + type + "'");
}

json to_json(const JumpKernel& k) {
    switch (k.kind()) {
        case KernelKind::UniformProportionalUp:
            return {{"type", "uniform_proportional_up"}, {"alpha", k.parameter()}};
        case KernelKind::UniformProportionalDown:
            return {{"type", "uniform_proportional_down"}, {"alpha", k.parameter()}};
        case KernelKind::FixedUp: return {{"type", "fixed_up"}, {"size", k.parameter()}};
        case KernelKind::FixedDown: return {{"type", "fixed_down"}, {"size", k.parameter()}};
    }
    return {};
}

JumpKernel kernel_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "uniform_proportional_up") {
        return JumpKernel::uniform_proportional_up(j.at("alpha").get<double>());
    }
    if (type == "uniform_proportional_down") {
        return JumpKernel::uniform_proportional_down(j.at("alpha").get<double>());
    }
    if (type == "fixed_up") return JumpKernel::fixed_up(j.at("size").get<double>());
    if (type == "fixed_down") return JumpKernel::fixed_down(j.at("size").get<double>());
    throw InvalidParameter("unknown kernel type '" + type + "'");
}

json to_json(const ProcessSpec& spec) {
    return {
        {"drift", to_json(spec.drift)},
        {"diffusion", to_json(spec.diffusion)},
        {"up_rate", spec.up_jumps.rate},
        {"up_kernel", to_json(spec.up_jumps.kernel)},
        {"down_rate", spec.down_jumps.rate},
        {"down_kernel", to_json(spec.down_jumps.kernel)},
        {"a", spec.interval.a},
        {"b", spec.interval.b},
    };
}

ProcessSpec process_from_json(const json& j) {
    static const char* const allowed[] = {"drift",       "diffusion", "up_rate", "up_kernel",
                                          "down_rate",   "down_kernel", "a",     "b", "label"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(allowed), std::end(allowed), key) == std::end(allowed)) {
            throw InvalidParameter("unknown process field '" + key + "'");
        }
    }
    ProcessSpec spec;
    spec.drift = coefficient_from_json(j.at("drift"));
    spec.diffusion = coefficient_from_json(j.at("diffusion"));
    spec.interval = Interval(j.at("a").get<double>(), j.at("b").get<double>());
    spec.up_jumps.rate = j.value("up_rate", 0.0);
    if (j.contains("up_kernel")) spec.up_jumps.kernel = kernel_from_json(j.at("up_kernel"));
    spec.down_jumps.rate = j.value("down_rate", 0.0);
    spec.down_jumps.kernel = j.contains("down_kernel") ? kernel_from_json(j.at("down_kernel"))
                                                       : JumpKernel::fixed_down(1.0);
    spec.label = j.value("label", std::string("preset"));
    spec.validate();
    return spec;
}

json to_json(const DensitySpec& d) {
    switch (d.kind()) {
        case DensityKind::Beta:
            return {{"type", "beta"}, {"alpha", d.alpha()}, {"beta", d.beta_param()}};
        case DensityKind::ModifiedBeta:
            return {{"type", "modified_beta"}, {"alpha", d.alpha()}, {"beta", d.beta_param()},
                    {"a", d.support().a},      {"b", d.support().b}};
        case DensityKind::Uniform:
            return {{"type", "uniform"}, {"a", d.support().a}, {"b", d.support().b}};
        case DensityKind::Tabulated: {
            json j{{"type", "tabulated"}};
            j["x"] = std::vector<double>(d.nodes().begin(), d.nodes().end());
            j["g"] = std::vector<double>(d.node_values().begin(), d.node_values().end());
            return j;
        }
    }
    return {};
}

DensitySpec density_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "beta") return DensitySpec::beta(j.at("alpha"), j.at("beta"));
    if (type == "modified_beta") {
        return DensitySpec::modified_beta(j.at("alpha"), j.at("beta"), j.at("a"), j.at("b"));
    }
    if (type == "uniform") return DensitySpec::uniform(j.at("a"), j.at("b"));
    if (type == "tabulated") {
        return DensitySpec::tabulated(j.at("x").get<std::vector<double>>(),
                                      j.at("g").get<std::vector<double>>());
    }
    throw InvalidParameter("unknown density type '" + type + "'");
}

}  // namespace fpp
