#include "fpp/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "fpp/nelder_mead.hpp"
#include "fpp/quadrature.hpp"

namespace fpp {

// ---------------------------------------------------------------------------
// Providers

PiaProvider PiaProvider::closed_form(const ExampleParams& params) {
    PiaProvider p;
    p.kind_ = Kind::ClosedForm;
    p.closed_.emplace(params);
    p.interval_ = p.closed_->interval();
    p.monotone_ = params.example_id == 1 || params.example_id == 4;
    return p;
}

PiaProvider PiaProvider::pide(SolutionField field) {
    PiaProvider p;
    p.kind_ = Kind::PIDE;
    p.interval_ = field.grid().interval();
    p.field_ = std::make_shared<const SolutionField>(std::move(field));
    return p;
}

PiaProvider PiaProvider::monte_carlo(ProcessSpec spec, SimConfig cfg) {
    cfg.validate();
    spec.validate();
    PiaProvider p;
    p.kind_ = Kind::MonteCarlo;
    p.interval_ = spec.interval;
    p.spec_ = std::move(spec);
    p.cfg_ = cfg;
    return p;
}

double PiaProvider::operator()(double x) const {
    switch (kind_) {
        case Kind::ClosedForm: return (*closed_)(x, ClosedFormMode::Outer);
        case Kind::PIDE: return (*field_)(x);
        case Kind::MonteCarlo: break;
    }
    throw std::logic_error("Monte Carlo provider has no pointwise pi_a");
}

std::vector<double> PiaProvider::breakpoints() const {
    std::vector<double> out;
    if (kind_ == Kind::ClosedForm && closed_->params().example_id == 7) {
        out.push_back(closed_->params().epsilon);
    } else if (kind_ == Kind::PIDE) {
        const Grid& g = field_->grid();
        for (std::size_t i = 1; i <= g.size(); ++i) out.push_back(g.node(i));
    }
    return out;
}

std::string PiaProvider::describe() const {
    switch (kind_) {
        case Kind::ClosedForm:
            return "closed form, example " + std::to_string(closed_->params().example_id);
        case Kind::PIDE: return field_->provenance().describe();
        case Kind::MonteCarlo: {
            std::ostringstream os;
            os << "mc(paths=" << cfg_.n_paths << ",dt=" << cfg_.dt << ",seed=" << cfg_.seed << ")";
            return os.str();
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Forward map

ForwardResult forward_q(const DensitySpec& g, const PiaProvider& pia) {
    const Interval s = g.support();
    const Interval I = pia.interval();
    const double tol = 1e-12 * std::max(1.0, std::abs(I.a) + std::abs(I.b));
    if (s.a < I.a - tol || s.b > I.b + tol) {
        throw InvalidParameter("density support " + g.describe() + " not inside [a, b]");
    }
    if (pia.stochastic()) {
        const EstimateWithError est = estimate_pia(*pia.process(), g, pia.sim_config());
        if (!est.reliable) {
            throw std::runtime_error("Monte Carlo forward map: more than 1% censored paths");
        }
        return {est.p_hat, est.std_error};
    }
    std::vector<double> breaks = g.breakpoints();
    for (double x : pia.breakpoints()) {
        if (x > s.a && x < s.b) breaks.push_back(x);
    }
    const auto integrand = [&](double x, double from_a, double to_b) {
        return g.pdf(x, from_a, to_b) * pia(x);
    };
    return {quad::piecewise_ends(integrand, std::move(breaks)), 0.0};
}

double psi(const DensitySpec& g, const PiaProvider& pia, double target_q) {
    const double d = target_q - forward_q(g, pia).q;
    return d * d;
}

// ---------------------------------------------------------------------------
// Families

const char* to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Beta: return "beta";
        case FamilyKind::ModifiedBeta: return "modbeta";
        case FamilyKind::Uniform: return "uniform";
    }
    return "?";
}

FamilyKind family_from_string(const std::string& name) {
    if (name == "beta") return FamilyKind::Beta;
    if (name == "modbeta" || name == "modified_beta") return FamilyKind::ModifiedBeta;
    if (name == "uniform") return FamilyKind::Uniform;
    throw InvalidParameter("unknown density family '" + name + "'");
}

DensitySpec DensityFamily::make(double alpha, double beta) const {
    switch (kind) {
        case FamilyKind::Beta: return DensitySpec::beta(alpha, beta);
        case FamilyKind::ModifiedBeta:
            return DensitySpec::modified_beta(alpha, beta, support.a, support.b);
        case FamilyKind::Uniform: return DensitySpec::uniform(support.a, support.b);
    }
    throw std::logic_error("unknown family");
}

DensityFamily family_for(FamilyKind kind, const PiaProvider& pia) {
    DensityFamily f;
    f.kind = kind;
    f.support = kind == FamilyKind::Beta ? Interval(0.0, 1.0) : pia.interval();
    return f;
}

void InverseProblem::validate() const {
    if (!(target_q > 0.0 && target_q < 1.0)) {
        throw InvalidParameter("target q must lie in (0, 1)");
    }
    if (family.has_parameters() &&
        !(family.lower > 0.0 && family.lower < family.upper && std::isfinite(family.upper))) {
        throw InvalidParameter("family bounds must satisfy 0 < lower < upper");
    }
}

nlohmann::json InverseSolution::to_json() const {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& [a, b] : curve_samples) samples.push_back({{"alpha", a}, {"beta", b}});
    return {
        {"family", fpp::to_string(family)},
        {"params", {{"alpha", alpha}, {"beta", beta}}},
        {"achieved_q", achieved_q},
        {"se", std_error},
        {"psi", psi_value},
        {"objective", objective_value},
        {"curve_samples", samples},
        {"notes", notes},
    };
}

// ---------------------------------------------------------------------------
// Solver

namespace {

struct Evaluator {
    const InverseProblem& problem;
    double regularization;

    ForwardResult forward(double alpha, double beta) const {
        return forward_q(problem.family.make(alpha, beta), problem.pia);
    }
    double defect(double alpha, double beta) const {
        return forward(alpha, beta).q - problem.target_q;
    }
    double objective(double alpha, double beta, double q) const {
        const double d = q - problem.target_q;
        return d * d +
               regularization * ((alpha - 1.0) * (alpha - 1.0) + (beta - 1.0) * (beta - 1.0));
    }
};

double clamp_to(double v, const DensityFamily& f) { return std::clamp(v, f.lower, f.upper); }

// Gradient of q in (alpha, beta) by central differences.
std::pair<double, double> q_gradient(const Evaluator& ev, double alpha, double beta) {
    const DensityFamily& f = ev.problem.family;
    const auto partial = [&](bool wrt_alpha) {
        const double x = wrt_alpha ? alpha : beta;
        const double h = 1e-6 * x;
        const double xp = std::min(x + h, f.upper);
        const double xm = std::max(x - h, f.lower);
        const double qp = wrt_alpha ? ev.forward(xp, beta).q : ev.forward(alpha, xp).q;
        const double qm = wrt_alpha ? ev.forward(xm, beta).q : ev.forward(alpha, xm).q;
        return (qp - qm) / (xp - xm);
    };
    return {partial(true), partial(false)};
}

// Newton steps along the free part of grad q until q(p) = target.
void project_onto_level_set(const Evaluator& ev, double& alpha, double& beta) {
    const DensityFamily& f = ev.problem.family;
    for (int it = 0; it < 30; ++it) {
        const double d = ev.defect(alpha, beta);
        if (std::abs(d) < 1e-15) return;
        auto [ga, gb] = q_gradient(ev, alpha, beta);
        // freeze coordinates pinned at a bound when the step would push outward
        const auto pushes_out = [&](double v, double g) {
            const double step = -d * g;
            return (v <= f.lower * (1.0 + 1e-12) && step < 0.0) ||
                   (v >= f.upper * (1.0 - 1e-12) && step > 0.0);
        };
        if (pushes_out(alpha, ga)) ga = 0.0;
        if (pushes_out(beta, gb)) gb = 0.0;
        const double norm2 = ga * ga + gb * gb;
        if (!(norm2 > 0.0)) return;
        alpha = clamp_to(alpha - d * ga / norm2, f);
        beta = clamp_to(beta - d * gb / norm2, f);
    }
}

// Moves along the level set towards the point closest to (1, 1).
void refine_on_level_set(const Evaluator& ev, double& alpha, double& beta) {
    const DensityFamily& f = ev.problem.family;
    project_onto_level_set(ev, alpha, beta);
    for (int it = 0; it < 60; ++it) {
        const auto [ga, gb] = q_gradient(ev, alpha, beta);
        const double tx = -gb;
        const double ty = ga;
        const double t2 = tx * tx + ty * ty;
        if (!(t2 > 0.0)) return;
        const double s = -((alpha - 1.0) * tx + (beta - 1.0) * ty) / t2;
        double na = clamp_to(alpha + s * tx, f);
        double nb = clamp_to(beta + s * ty, f);
        project_onto_level_set(ev, na, nb);
        const double before = (alpha - 1.0) * (alpha - 1.0) + (beta - 1.0) * (beta - 1.0);
        const double after = (na - 1.0) * (na - 1.0) + (nb - 1.0) * (nb - 1.0);
        const double moved = std::max(std::abs(na - alpha), std::abs(nb - beta));
        if (!(after < before)) return;
        alpha = na;
        beta = nb;
        if (moved < 1e-13 * std::max(1.0, std::max(alpha, beta))) return;
    }
}

}  // namespace

std::optional<double> solve_beta_for_alpha(const InverseProblem& problem, double alpha) {
    const Evaluator ev{problem, 0.0};
    const DensityFamily& f = problem.family;
    constexpr int kScan = 32;
    const double ratio = std::log(f.upper / f.lower);
    double prev_b = f.lower;
    double prev_d = ev.defect(alpha, prev_b);
    if (prev_d == 0.0) return prev_b;
    const int steps = problem.pia.monotone_in_beta() ? 1 : kScan - 1;
    for (int k = 1; k <= steps; ++k) {
        const double b = f.lower * std::exp(ratio * k / steps);
        const double d = ev.defect(alpha, b);
        if (d == 0.0) return b;
        if ((d > 0.0) != (prev_d > 0.0)) {
            std::uintmax_t max_iter = 200;
            const auto root = boost::math::tools::toms748_solve(
                [&](double x) { return ev.defect(alpha, x); }, prev_b, b, prev_d, d,
                boost::math::tools::eps_tolerance<double>(52), max_iter);
            const double mid = 0.5 * (root.first + root.second);
            const double candidates[] = {root.first, root.second, mid};
            double best = mid;
            double best_abs = std::numeric_limits<double>::infinity();
            for (double c : candidates) {
                const double dc = std::abs(ev.defect(alpha, c));
                if (dc < best_abs) {
                    best_abs = dc;
                    best = c;
                }
            }
            return best;
        }
        prev_b = b;
        prev_d = d;
    }
    return std::nullopt;
}

InverseSolution solve_inverse(const InverseProblem& problem, const InverseOptions& options) {
    problem.validate();
    const DensityFamily& fam = problem.family;
    InverseSolution sol;
    sol.family = fam.kind;
    sol.notes.push_back("provider: " + problem.pia.describe());

    if (!fam.has_parameters()) {
        const ForwardResult fr = forward_q(fam.make(1.0, 1.0), problem.pia);
        sol.achieved_q = fr.q;
        sol.std_error = fr.std_error;
        sol.psi_value = (problem.target_q - fr.q) * (problem.target_q - fr.q);
        sol.objective_value = sol.psi_value;
        sol.notes.push_back("uniform family has no free parameters: verification only");
        return sol;
    }

    const Evaluator ev{problem, options.regularization};
    const std::size_t G = std::max<std::size_t>(options.grid_size, 2);
    const double log_lo = std::log(fam.lower);
    const double log_hi = std::log(fam.upper);
    const double cell = (log_hi - log_lo) / static_cast<double>(G - 1);

    // (1) coarse scan on a logarithmic grid
    double best_j = std::numeric_limits<double>::infinity();
    double best_u = log_lo, best_v = log_lo, best_q = 0.0;
    double q_min = std::numeric_limits<double>::infinity();
    double q_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < G; ++i) {
        for (std::size_t j = 0; j < G; ++j) {
            const double u = log_lo + cell * static_cast<double>(i);
            const double v = log_lo + cell * static_cast<double>(j);
            const double alpha = std::exp(u);
            const double beta = std::exp(v);
            const double q = ev.forward(alpha, beta).q;
            q_min = std::min(q_min, q);
            q_max = std::max(q_max, q);
            const double J = ev.objective(alpha, beta, q);
            if (J < best_j) {
                best_j = J;
                best_u = u;
                best_v = v;
                best_q = q;
            }
        }
    }

    // (2) Nelder-Mead in log-parameters, clamped to the box
    const auto objective = [&](const std::vector<double>& p) {
        const double u = std::clamp(p[0], log_lo, log_hi);
        const double v = std::clamp(p[1], log_lo, log_hi);
        const double excess = std::abs(p[0] - u) + std::abs(p[1] - v);
        const double alpha = std::exp(u);
        const double beta = std::exp(v);
        return ev.objective(alpha, beta, ev.forward(alpha, beta).q) + excess * excess;
    };
    NelderMeadOptions nm_opts;
    nm_opts.f_tolerance = 1e-12 * options.psi_tolerance;
    nm_opts.x_tolerance = 1e-10;
    nm_opts.max_iterations = problem.pia.stochastic() ? 200 : 2000;
    const NelderMeadResult nm = nelder_mead(objective, {best_u, best_v}, {cell, cell}, nm_opts);
    double alpha = std::exp(std::clamp(nm.x[0], log_lo, log_hi));
    double beta = std::exp(std::clamp(nm.x[1], log_lo, log_hi));
    {
        std::ostringstream os;
        os << "nelder-mead: " << nm.iterations << " iterations"
           << (nm.converged ? "" : " (iteration cap reached)");
        sol.notes.push_back(os.str());
    }

    // (3) refinement on the level set; the regularizer's minimizer on it
    if (!problem.pia.stochastic()) {
        refine_on_level_set(ev, alpha, beta);
    }

    const ForwardResult fr = ev.forward(alpha, beta);
    sol.alpha = alpha;
    sol.beta = beta;
    sol.achieved_q = fr.q;
    sol.std_error = fr.std_error;
    sol.psi_value = (problem.target_q - fr.q) * (problem.target_q - fr.q);
    sol.objective_value = ev.objective(alpha, beta, fr.q);

    const double accept = problem.pia.stochastic()
                              ? std::max(options.psi_tolerance, 9.0 * fr.std_error * fr.std_error)
                              : options.psi_tolerance;
    if (sol.psi_value > accept) {
        std::ostringstream os;
        os.precision(10);
        os << "target q=" << problem.target_q << " unreachable within bounds ["
           << fam.lower << ", " << fam.upper << "]^2: achievable q range on the scan is ["
           << q_min << ", " << q_max << "], best q=" << fr.q;
        throw UnreachableTarget(os.str(), q_min, q_max, best_q);
    }

    // (4) further points on the level set
    if (!problem.pia.stochastic() && options.curve_samples > 0) {
        const auto collect = [&](std::size_t count, double offset) {
            for (std::size_t k = 0; k < count && sol.curve_samples.size() < options.curve_samples;
                 ++k) {
                const double a = std::exp(log_lo + (log_hi - log_lo) *
                                                       (static_cast<double>(k) + offset) /
                                                       static_cast<double>(count));
                const auto b = solve_beta_for_alpha(problem, a);
                if (!b) continue;
                const double d = ev.defect(a, *b);
                if (d * d <= options.psi_tolerance) sol.curve_samples.emplace_back(a, *b);
            }
        };
        collect(options.curve_samples, 0.5);
        if (sol.curve_samples.size() < options.curve_samples) {
            collect(8 * options.curve_samples, 0.25);
        }
        std::ostringstream os;
        os << "solution set is a curve in (alpha, beta); " << sol.curve_samples.size()
           << " further points sampled; returned point is the one closest to (1, 1)";
        sol.notes.push_back(os.str());
    } else if (problem.pia.stochastic()) {
        sol.notes.push_back("Monte Carlo provider: common random numbers, acceptance at 3 SE");
    }
    return sol;
}

}  // namespace fpp
