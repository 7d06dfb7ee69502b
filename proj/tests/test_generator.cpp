#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fpp/closed_forms.hpp"
#include "fpp/generator.hpp"

using namespace fpp;

namespace {

Candidate trig(double k, double phase) {
    return {[=](double x) { return std::sin(k * x + phase); },
            [=](double x) { return k * std::cos(k * x + phase); },
            [=](double x) { return -k * k * std::sin(k * x + phase); }};
}

Candidate quadratic(double c0, double c1, double c2) {
    return {[=](double x) { return c0 + c1 * x + c2 * x * x; },
            [=](double x) { return c1 + 2 * c2 * x; },
            [=](double) { return 2 * c2; }};
}

Candidate sum(const Candidate& u, const Candidate& v) {
    return {[=](double x) { return u.value(x) + v.value(x); },
            [=](double x) { return u.d1(x) + v.d1(x); },
            [=](double x) { return u.d2(x) + v.d2(x); }};
}

}  // namespace

TEST_CASE("generator is linear") {
    // outer conditions make the operator affine: L[v1 + v2] = L[v1] + L[v2] - L[0]
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    const Candidate zero = quadratic(0.0, 0.0, 0.0);
    for (int id : {1, 4, 5, 6, 7}) {
        const ProcessSpec spec = build_example(id, default_example_params(id));
        for (auto policy : {ExtensionPolicy::OuterConditions, ExtensionPolicy::AnalyticContinuation}) {
            const Candidate v1 = trig(U(rng) * 3, U(rng));
            const Candidate v2 = quadratic(U(rng), U(rng), U(rng));
            const Candidate v12 = sum(v1, v2);
            std::uniform_real_distribution<double> X(spec.interval.a, spec.interval.b);
            for (int i = 0; i < 32; ++i) {
                const double x = X(rng);
                const double lhs = apply_generator(spec, v12, x, {policy});
                const double rhs = apply_generator(spec, v1, x, {policy}) + apply_generator(spec, v2, x, {policy}) -
                                   apply_generator(spec, zero, x, {policy});
                CHECK(std::abs(lhs - rhs) <= 1e-8);
                if (policy == ExtensionPolicy::AnalyticContinuation) {
                    CHECK(apply_generator(spec, zero, x, {policy}) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("constants are annihilated") {
    for (int id = 1; id <= 7; ++id) {
        const ProcessSpec spec = build_example(id, default_example_params(id));
        const Candidate c = quadratic(0.7, 0.0, 0.0);
        for (int i = 1; i < 20; ++i) {
            const double x = spec.interval.a + spec.interval.length() * i / 20.0;
            CHECK(std::abs(apply_generator(spec, c, x, {ExtensionPolicy::AnalyticContinuation})) <= 1e-12);
        }
    }
}

TEST_CASE("central differences are second order") {
    const auto f = [](double x) { return std::exp(std::sin(3 * x)); };
    const auto d1 = [](double x) { return 3 * std::cos(3 * x) * std::exp(std::sin(3 * x)); };
    const auto d2 = [](double x) {
        const double c = 3 * std::cos(3 * x);
        return (c * c - 9 * std::sin(3 * x)) * std::exp(std::sin(3 * x));
    };
    for (double x : {0.1, 0.4, 0.8}) {
        const auto coarse = central_differences(f, x, 1e-2);
        const auto fine = central_differences(f, x, 5e-3);
        const double r1 = std::abs(coarse.d1 - d1(x)) / std::abs(fine.d1 - d1(x));
        const double r2 = std::abs(coarse.d2 - d2(x)) / std::abs(fine.d2 - d2(x));
        CHECK(r1 >= 3.0);
        CHECK(r1 <= 5.0);
        CHECK(r2 >= 3.0);
        CHECK(r2 <= 5.0);
    }
}

TEST_CASE("Example 7 jump term beyond eps sees the outer value 0") {
    const ExampleParams p = default_example_params(7);
    const ProcessSpec spec = build_example(7, p);
    const Candidate v = Candidate::from_closed_form(ClosedFormPia(p));
    for (double x : {0.55, 0.7, 0.95}) {
        CHECK(nonlocal_term(spec, v, x, ExtensionPolicy::OuterConditions) == doctest::Approx(-v.value(x)));
    }
    for (double x : {0.05, 0.3, 0.49, 0.51, 0.8}) {
        CHECK(std::abs(apply_generator(spec, v, x)) <= 1e-10);
    }
}

TEST_CASE("Example 1 linear solution in the overshoot-free region") {
    const ExampleParams p = default_example_params(1);
    const ProcessSpec spec = build_example(1, p);
    const Candidate v = Candidate::from_closed_form(ClosedFormPia(p));
    for (int i = 1; i < 100; ++i) {
        const double x = i / 100.0;
        if (x * (1 + p.alpha1) > p.b || x * (1 - p.alpha2) < p.a) continue;
        CHECK_FALSE(overshoot_possible(spec, x));
        for (auto policy : {ExtensionPolicy::OuterConditions, ExtensionPolicy::AnalyticContinuation}) {
            CHECK(std::abs(apply_generator(spec, v, x, {policy})) <= 1e-10);
        }
    }
}

TEST_CASE("Example 6 residual under both policies") {
    const ExampleParams p = default_example_params(6);
    const ProcessSpec spec = build_example(6, p);
    const Candidate v = Candidate::from_closed_form(ClosedFormPia(p));
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(std::abs(apply_generator(spec, v, x, {ExtensionPolicy::AnalyticContinuation})) <= 1e-10);
        CHECK(apply_generator(spec, v, x, {ExtensionPolicy::OuterConditions}) ==
              doctest::Approx(-p.lambda1 * std::cos(0.5 * std::numbers::pi * x)).epsilon(1e-10));
    }
}

TEST_CASE("residual profiles of the closed forms") {
    for (int id : {2, 5}) {
        const ExampleParams p = default_example_params(id);
        const ProcessSpec spec = build_example(id, p);
        const auto prof = residual_profile(spec, Candidate::from_closed_form(ClosedFormPia(p)), 101,
                                           {ExtensionPolicy::AnalyticContinuation});
        CHECK(prof.x.size() == 101);
        CHECK(prof.max_abs() <= 1e-9);
    }
    const ExampleParams p4 = default_example_params(4);
    const ProcessSpec s4 = build_example(4, p4);
    const auto prof4 = residual_profile(s4, Candidate::from_closed_form(ClosedFormPia(p4)), 101,
                                        {ExtensionPolicy::OuterConditions});
    for (std::size_t i = 0; i < prof4.x.size(); ++i) {
        const double x = prof4.x[i];
        if (x + p4.eps_bar <= s4.interval.b && x - p4.delta_bar >= s4.interval.a) {
            CHECK_FALSE(prof4.overshoot[i]);
            CHECK(std::abs(prof4.residual[i]) <= 1e-10);
        }
    }
    for (int id = 1; id <= 5; ++id) {
        const ExampleParams p = default_example_params(id);
        const auto prof = residual_profile(build_example(id, p), Candidate::from_closed_form(ClosedFormPia(p)),
                                           101, {ExtensionPolicy::OuterConditions});
        CHECK(prof.max_abs_overshoot_free() <= 1e-9);
    }
}

TEST_CASE("finite-difference generator matches exact derivatives") {
    const ExampleParams p = default_example_params(5);
    const ProcessSpec spec = build_example(5, p);
    const Candidate v = Candidate::from_closed_form(ClosedFormPia(p));
    GeneratorOptions fd;
    fd.force_finite_differences = true;
    fd.fd_step_fraction = 1e-3;
    for (double x : {0.2, 0.5, 0.8}) {
        CHECK(std::abs(apply_generator(spec, v, x, fd) - apply_generator(spec, v, x)) <= 1e-5);
    }
}
