#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "fpp/closed_forms.hpp"
#include "fpp/generator.hpp"
#include "fpp/pide_solver.hpp"

using namespace fpp;

namespace {

ProcessSpec brownian() {
    ProcessSpec s;
    s.diffusion = CoefficientField::constant(1.0);
    s.interval = Interval(0.0, 1.0);
    return s;
}

ProcessSpec sqrt_x_spec() {
    ProcessSpec s;
    s.drift = CoefficientField::constant(-0.5);
    s.diffusion = CoefficientField::sqrt_x();
    s.interval = Interval(0.0, 1.0);
    return s;
}

}  // namespace

TEST_CASE("dense solver") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const std::size_t n = 12;
    DenseMatrix A(n, n);
    std::vector<double> x(n), b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = U(rng);
        for (std::size_t j = 0; j < n; ++j) A(i, j) = U(rng) + (i == j ? 4.0 : 0.0);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += A(i, j) * x[j];
    const auto y = solve_dense(A, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
    DenseMatrix singular(2, 2);
    CHECK_THROWS(solve_dense(singular, {1.0, 1.0}));
}

TEST_CASE("Brownian assembly is tridiagonal") {
    const Grid grid(Interval(0.0, 1.0), 15);
    const LinearSystem sys = assemble(brownian(), grid);
    for (std::size_t i = 0; i < 15; ++i) {
        for (std::size_t j = 0; j < 15; ++j) {
            if (i > j + 1 || j > i + 1) CHECK(sys.matrix(i, j) == 0.0);
        }
    }
    CHECK(sys.rhs[0] != 0.0);
    CHECK(sys.rhs[14] == 0.0);
}

TEST_CASE("Example 7 rows couple to x + eps only left of eps") {
    const ProcessSpec spec = build_example(7, default_example_params(7));
    const Grid grid(spec.interval, 31);
    const LinearSystem sys = assemble(spec, grid);
    for (std::size_t i = 0; i < 31; ++i) {
        std::size_t far = 0;
        for (std::size_t j = 0; j < 31; ++j) {
            if ((j + 1 < i || j > i + 1) && sys.matrix(i, j) != 0.0) ++far;
        }
        CHECK(far == (grid.node(i + 1) < 0.5 ? 1u : 0u));
    }
}

TEST_CASE("Brownian solution is linear") {
    const SolutionField f = solve(brownian(), 255);
    double worst = 0.0;
    for (std::size_t i = 1; i <= 255; ++i) {
        const double x = f.grid().node(i);
        worst = std::max(worst, std::abs(f(x) - (1.0 - x)));
    }
    CHECK(worst <= 1e-4);
    CHECK(f(-0.5) == 1.0);
    CHECK(f(1.5) == 0.0);
}

TEST_CASE("maximum principle for the catalog") {
    for (int id = 1; id <= 7; ++id) {
        const SolutionField f = solve(build_example(id, default_example_params(id)), 127);
        CHECK(f.raw_excess() <= kMaximumPrincipleTolerance);
        for (double v : f.values()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("Example 7 matches the closed form at n = 511") {
    const ExampleParams p = default_example_params(7);
    const SolutionField f = solve(build_example(7, p), 511);
    CHECK(std::abs(f(0.5) - pia_closed(p, 0.5)) <= 1e-3);
    double worst = 0.0;
    for (std::size_t i = 1; i <= 511; ++i) {
        const double x = f.grid().node(i);
        worst = std::max(worst, std::abs(f(x) - pia_closed(p, x)));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("grid refinement: error ratios near 4") {
    const std::array<std::size_t, 3> ns{31, 63, 127};
    const auto rows = convergence_study(sqrt_x_spec(), [](double x) { return 1.0 - x * x; }, ns);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ratio = rows[i - 1].max_error / rows[i].max_error;
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
    }
    const ExampleParams p = default_example_params(7);
    const auto rows7 = convergence_study(build_example(7, p), [&](double x) { return pia_closed(p, x); }, ns);
    for (std::size_t i = 1; i < rows7.size(); ++i) {
        const double ratio = rows7[i - 1].max_node_error / rows7[i].max_node_error;
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
    }
    const auto rows_bm = convergence_study(brownian(), [](double x) { return 1.0 - x; }, ns);
    for (const auto& r : rows_bm) CHECK(r.max_error <= 1e-12);
}

TEST_CASE("PIDE solution is self-consistent under the generator") {
    // with the grid spacing as difference step the interpolant reproduces
    // the discrete equations, so the residual sits at round-off for every n
    const ExampleParams p = default_example_params(5);
    const ProcessSpec spec = build_example(5, p);
    for (std::size_t n : {63u, 127u, 255u}) {
        const SolutionField f = solve(spec, n);
        Candidate v;
        v.value = [&f](double x) { return f(x); };
        GeneratorOptions opts;
        opts.force_finite_differences = true;
        opts.fd_step_fraction = 1.0 / static_cast<double>(n + 1);
        double worst = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double x = f.grid().node(i);
            if (overshoot_possible(spec, x) || x < 0.15 || x > 0.85) continue;
            worst = std::max(worst, std::abs(apply_generator(spec, v, x, opts)));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("solution field serialization") {
    const SolutionField f = solve(brownian(), 8);
    std::ostringstream os;
    f.write_csv(os);
    CHECK(os.str().rfind("x,value\n", 0) == 0);
    const auto j = f.to_json();
    CHECK(j.contains("provenance"));
    CHECK_THROWS_AS(Grid(Interval(0, 1), 4), InvalidParameter);
}
