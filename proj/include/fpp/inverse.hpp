#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpp/closed_forms.hpp"
#include "fpp/mc.hpp"
#include "fpp/model.hpp"
#include "fpp/pide_solver.hpp"

namespace fpp {

/// Source of pi_a(x) used by the forward map.
class PiaProvider {
public:
    enum class Kind { ClosedForm, PIDE, MonteCarlo };

    static PiaProvider closed_form(const ExampleParams& params);
    static PiaProvider pide(SolutionField field);
    static PiaProvider monte_carlo(ProcessSpec spec, SimConfig cfg);

    Kind kind() const { return kind_; }
    Interval interval() const { return interval_; }
    bool stochastic() const { return kind_ == Kind::MonteCarlo; }

    /// Known to make q increase with beta at fixed alpha (Examples 1 and 4).
    bool monotone_in_beta() const { return monotone_; }

    /// pi_a(x); not available for the Monte Carlo provider.
    double operator()(double x) const;

    /// Kinks of pi_a inside (a, b).
    std::vector<double> breakpoints() const;

    const ProcessSpec* process() const { return spec_ ? &*spec_ : nullptr; }
    const SimConfig& sim_config() const { return cfg_; }
    std::string describe() const;

private:
    PiaProvider() = default;

    Kind kind_ = Kind::ClosedForm;
    Interval interval_;
    bool monotone_ = false;
    std::optional<ClosedFormPia> closed_;
    std::shared_ptr<const SolutionField> field_;
    std::optional<ProcessSpec> spec_;
    SimConfig cfg_;
};

struct ForwardResult {
    double q = 0.0;
    double std_error = 0.0;  // 0 for deterministic providers
};

/// q = int_a^b g(x) pi_a(x) dx, by quadrature (split at density and
/// provider breakpoints) or by Monte Carlo with a random start.
ForwardResult forward_q(const DensitySpec& g, const PiaProvider& pia);

/// (target - int g pi_a)^2.
double psi(const DensitySpec& g, const PiaProvider& pia, double target_q);

enum class FamilyKind { Beta, ModifiedBeta, Uniform };

const char* to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);

struct DensityFamily {
    FamilyKind kind = FamilyKind::Beta;
    Interval support;  // (0, 1) for Beta
    double lower = 0.05;
    double upper = 50.0;

    DensitySpec make(double alpha, double beta) const;
    bool has_parameters() const { return kind != FamilyKind::Uniform; }
};

/// Family of the given kind on the provider's interval ((0, 1) for Beta).
DensityFamily family_for(FamilyKind kind, const PiaProvider& pia);

struct InverseProblem {
    double target_q;
    DensityFamily family;
    PiaProvider pia;

    void validate() const;
};

struct InverseOptions {
    std::size_t grid_size = 32;
    double regularization = 1e-8;
    std::size_t curve_samples = 16;
    /// Largest psi accepted as a solution for deterministic providers.
    double psi_tolerance = 1e-16;
};

struct InverseSolution {
    FamilyKind family = FamilyKind::Beta;
    double alpha = 1.0;
    double beta = 1.0;
    double achieved_q = 0.0;
    double std_error = 0.0;
    double psi_value = 0.0;
    double objective_value = 0.0;  // psi + regularizer
    std::vector<std::pair<double, double>> curve_samples;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

/// Raised when no member of the family reaches the target within bounds.
class UnreachableTarget : public std::runtime_error {
public:
    UnreachableTarget(const std::string& what, double q_min, double q_max, double best_q)
        : std::runtime_error(what), q_min(q_min), q_max(q_max), best_q(best_q) {}

    double q_min;
    double q_max;
    double best_q;
};

/// Minimizes psi + r ((alpha - 1)^2 + (beta - 1)^2) over the family box:
/// log-grid scan, Nelder-Mead from the best cell, then a refinement on the
/// level set q = target that keeps the point closest to (1, 1), followed by
/// sampling of further points on the level set.
InverseSolution solve_inverse(const InverseProblem& problem, const InverseOptions& options = {});

/// For fixed alpha, the beta in the family bounds achieving the target, by
/// bracketing and root finding. nullopt when no sign change exists.
std::optional<double> solve_beta_for_alpha(const InverseProblem& problem, double alpha);

}  // namespace fpp
