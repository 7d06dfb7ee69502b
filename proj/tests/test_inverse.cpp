#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fpp/inverse.hpp"
#include "fpp/special_functions.hpp"

using namespace fpp;

namespace {

ExampleParams brownian_params() {
    ExampleParams p = default_example_params(1);
    p.lambda1 = p.lambda2 = 0.0;
    return p;
}

}  // namespace

TEST_CASE("forward map") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.5, 5.0);
    const ExampleParams p1 = default_example_params(1);
    const PiaProvider pia1 = PiaProvider::closed_form(p1);
    ExampleParams p2 = default_example_params(2);
    p2.gamma = 2.7;
    const PiaProvider pia2 = PiaProvider::closed_form(p2);
    for (int i = 0; i < 10; ++i) {
        const double al = U(rng), be = U(rng);
        CHECK(std::abs(forward_q(DensitySpec::modified_beta(al, be, 0, 1), pia1).q - be / (al + be)) <= 1e-10);
        CHECK(std::abs(forward_q(DensitySpec::beta(al, be), pia2).q - (1 - beta_moment(al, be, 2.7))) <= 1e-10);
    }
    const PiaProvider pia6 = PiaProvider::closed_form(default_example_params(6));
    CHECK(std::abs(forward_q(DensitySpec::uniform(0, 1), pia6).q - 2 / std::numbers::pi) <= 1e-12);
}

TEST_CASE("psi") {
    const PiaProvider pia1 = PiaProvider::closed_form(default_example_params(1));
    CHECK(psi(DensitySpec::modified_beta(2, 3, 0, 1), pia1, 0.6) <= 1e-18);
    const PiaProvider bm = PiaProvider::closed_form(brownian_params());
    CHECK(psi(DensitySpec::uniform(0, 1), bm, 0.5) <= 1e-30);
    const PiaProvider pia6 = PiaProvider::closed_form(default_example_params(6));
    const double d = 0.9 - 2 / std::numbers::pi;
    CHECK(psi(DensitySpec::uniform(0, 1), pia6, 0.9) == doctest::Approx(d * d).epsilon(1e-12));
}

TEST_CASE("Example 1 target 0.5 picks the uniform density") {
    const PiaProvider pia = PiaProvider::closed_form(default_example_params(1));
    const InverseProblem prob{0.5, family_for(FamilyKind::ModifiedBeta, pia), pia};
    const InverseSolution s = solve_inverse(prob);
    CHECK(s.alpha == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.beta == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(s.achieved_q - 0.5) <= 1e-8);
    CHECK(s.psi_value <= 1e-16);
}

TEST_CASE("Example 2 target 2/3") {
    ExampleParams p = default_example_params(2);
    p.gamma = 2.0;
    const PiaProvider pia = PiaProvider::closed_form(p);
    const InverseProblem prob{2.0 / 3.0, family_for(FamilyKind::Beta, pia), pia};
    const InverseSolution s = solve_inverse(prob);
    CHECK(std::abs(q_power2_rational(s.alpha, s.beta) - 2.0 / 3.0) <= 1e-10);
    CHECK(s.curve_samples.size() >= 16);
    for (const auto& [al, be] : s.curve_samples) {
        CHECK(std::abs(q_power2_rational(al, be) - 2.0 / 3.0) <= 1e-8);
    }
}

TEST_CASE("Example 1 target 0.99 lies on beta = 99 alpha") {
    const PiaProvider pia = PiaProvider::closed_form(default_example_params(1));
    const InverseProblem prob{0.99, family_for(FamilyKind::ModifiedBeta, pia), pia};
    const InverseSolution s = solve_inverse(prob);
    CHECK(s.beta / s.alpha == doctest::Approx(99.0).epsilon(1e-6));
    CHECK(s.psi_value <= 1e-16);
}

TEST_CASE("monotone shortcut agrees with the optimizer") {
    const PiaProvider pia = PiaProvider::closed_form(default_example_params(1));
    CHECK(pia.monotone_in_beta());
    for (double target : {0.2, 0.37, 0.8}) {
        const InverseProblem prob{target, family_for(FamilyKind::ModifiedBeta, pia), pia};
        const InverseSolution s = solve_inverse(prob);
        const auto beta = solve_beta_for_alpha(prob, s.alpha);
        REQUIRE(beta.has_value());
        const double q = forward_q(prob.family.make(s.alpha, *beta), pia).q;
        CHECK(std::abs(q - s.achieved_q) <= 1e-10);
    }
    for (double al = 0.5; al < 5.0; al += 0.5) {
        double prev = 0.0;
        for (double be = 0.1; be < 10.0; be *= 1.7) {
            const double q = forward_q(DensitySpec::modified_beta(al, be, 0, 1), pia).q;
            CHECK(q > prev);
            prev = q;
        }
    }
}

TEST_CASE("unreachable targets report the achievable range") {
    ExampleParams p = default_example_params(2);
    p.gamma = 2.0;
    const PiaProvider pia = PiaProvider::closed_form(p);
    const InverseProblem prob{0.999999, family_for(FamilyKind::Beta, pia), pia};
    try {
        solve_inverse(prob);
        FAIL("expected UnreachableTarget");
    } catch (const UnreachableTarget& e) {
        CHECK(e.q_max < 0.999999);
        CHECK(e.q_min > 0.0);
        CHECK(e.q_min < e.q_max);
    }
}

TEST_CASE("uniform family is a verification") {
    const PiaProvider pia = PiaProvider::closed_form(default_example_params(6));
    const InverseProblem prob{0.6366197, family_for(FamilyKind::Uniform, pia), pia};
    const InverseSolution s = solve_inverse(prob);
    CHECK(s.psi_value <= 1e-12);
}

TEST_CASE("PIDE provider") {
    const ProcessSpec spec = build_example(7, default_example_params(7));
    const PiaProvider pia = PiaProvider::pide(solve(spec, 255));
    const InverseProblem prob{0.4, family_for(FamilyKind::ModifiedBeta, pia), pia};
    const InverseSolution s = solve_inverse(prob);
    CHECK(std::abs(forward_q(prob.family.make(s.alpha, s.beta), pia).q - 0.4) <= 1e-8);
    CHECK(s.psi_value <= 1e-16);
}

TEST_CASE("invalid problems") {
    const PiaProvider pia = PiaProvider::closed_form(default_example_params(1));
    CHECK_THROWS(solve_inverse(InverseProblem{1.2, family_for(FamilyKind::Beta, pia), pia}));
    DensityFamily bad = family_for(FamilyKind::Beta, pia);
    bad.lower = 2.0;
    bad.upper = 1.0;
    CHECK_THROWS(solve_inverse(InverseProblem{0.5, bad, pia}));
    CHECK_THROWS(family_from_string("gamma"));
}

TEST_CASE("solution json") {
    const PiaProvider pia = PiaProvider::closed_form(default_example_params(1));
    const InverseSolution s = solve_inverse(InverseProblem{0.3, family_for(FamilyKind::ModifiedBeta, pia), pia});
    const auto j = s.to_json();
    for (const char* key : {"family", "params", "achieved_q", "psi", "curve_samples", "notes"}) {
        CHECK(j.contains(key));
    }
}
