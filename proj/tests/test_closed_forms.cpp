#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fpp/closed_forms.hpp"
#include "fpp/quadrature.hpp"
#include "fpp/special_functions.hpp"

using namespace fpp;

namespace {

// Frozen from an independent shooting solve of the delay equation
// (1/2 v'' - v + v(x + eps) = 0 on (0, eps), 1/2 v'' - v = 0 on [eps, 2 eps))
// at 30 digits.
struct Ex7Oracle {
    double eps;
    double q;
    double v[4];  // at eps/10, eps/2, eps, 3 eps/2
};

constexpr Ex7Oracle kEx7[] = {
    {0.25, 0.48364826094569857, {0.94465714797270629, 0.72969768875372656, 0.47491369169457416, 0.23379428708269952}},
    {0.5, 0.44069649023252127, {0.92947334586981087, 0.67457079126965378, 0.40975174098668454, 0.1927057760822229}},
    {1.0, 0.32842975424252527, {0.87908418430548653, 0.51535123683475273, 0.24627986351605267, 0.097684221165381298}},
};

}  // namespace

TEST_CASE("pia closed form values") {
    ExampleParams p1 = default_example_params(1);
    CHECK(pia_closed(p1, 0.25) == doctest::Approx(0.75).epsilon(1e-15));
    ExampleParams p2 = default_example_params(2);
    p2.gamma = 2.0;
    CHECK(pia_closed(p2, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    const ExampleParams p7 = default_example_params(7);
    CHECK(pia_closed(p7, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(pia_closed(p7, 2.0 * p7.epsilon)) <= 1e-14);
    CHECK(pia_closed(p7, -1.0) == 1.0);
    CHECK(pia_closed(p7, 5.0) == 0.0);
}

TEST_CASE("Example 7 against the independent oracle") {
    for (const auto& o : kEx7) {
        ExampleParams p = default_example_params(7);
        p.epsilon = o.eps;
        const double xs[4] = {o.eps / 10, o.eps / 2, o.eps, 1.5 * o.eps};
        for (int i = 0; i < 4; ++i) CHECK(std::abs(pia_closed(p, xs[i]) - o.v[i]) <= 1e-12);
        const double q = quad::piecewise([&](double x) { return pia_closed(p, x); }, {0.0, o.eps, 2 * o.eps}) /
                         (2 * o.eps);
        CHECK(std::abs(q - o.q) <= 1e-12);
    }
}

TEST_CASE("Example 7 constants") {
    for (double eps : {0.1, 0.25, 0.5, 1.0, 2.0}) {
        const Example7Constants k = example7_constants(eps);
        CHECK(k.B == 1.0 - k.A);
        const double l = std::nextafter(eps, 0.0);
        CHECK(std::abs(example7_pi(k, l) - example7_pi(k, eps)) <= 1e-9);
        CHECK(std::abs(example7_pi_d1(k, l) - example7_pi_d1(k, eps)) <= 1e-9);
        CHECK(std::abs(example7_pi_d2(k, l) - example7_pi_d2(k, eps)) <= 1e-9);
    }
    // the printed constants are only C1 at eps
    const Example7Constants printed = example7_constants_as_printed(0.5);
    CHECK(printed.B == 1.0 - printed.A);
    const double l = std::nextafter(0.5, 0.0);
    CHECK(std::abs(example7_pi_d1(printed, l) - example7_pi_d1(printed, 0.5)) <= 1e-9);
    CHECK(std::abs(example7_pi_d2(printed, l) - example7_pi_d2(printed, 0.5)) > 1e-3);
}

TEST_CASE("transcribed q formula with the printed constants") {
    // frozen values of the formula itself; they are not exit probabilities
    CHECK(example7_q_transcribed(example7_constants_as_printed(0.25)) == doctest::Approx(4.5255).epsilon(1e-4));
    CHECK(example7_q_transcribed(example7_constants_as_printed(0.5)) == doctest::Approx(1.3017).epsilon(1e-4));
    CHECK(example7_q_transcribed(example7_constants_as_printed(1.0)) == doctest::Approx(0.4406).epsilon(1e-3));
}

TEST_CASE("closed forms are nonincreasing and in [0, 1]") {
    for (int id : {1, 2, 3, 5, 6, 7}) {
        const ExampleParams p = default_example_params(id);
        const ClosedFormPia pia(p);
        const Interval I = pia.interval();
        double prev = 1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double v = pia(I.a + I.length() * i / 1000.0);
            CHECK(v >= -1e-15);
            CHECK(v <= 1.0 + 1e-15);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("q closed forms") {
    CHECK(q_closed(default_example_params(6), DensitySpec::uniform(0, 1)) ==
          doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
    const double ln2 = std::numbers::ln2;
    CHECK(q_closed(default_example_params(5), DensitySpec::beta(1, 1)) ==
          doctest::Approx(2.0 - 1.0 / ln2).epsilon(1e-13));
    CHECK(q_closed(default_example_params(5), DensitySpec::beta(2, 2)) ==
          doctest::Approx(2.0 - 6.0 * (3.0 * ln2 - 2.0) / std::pow(ln2, 3)).epsilon(1e-12));
    ExampleParams p2 = default_example_params(2);
    p2.gamma = 2.0;
    CHECK(q_closed(p2, DensitySpec::beta(1, 1)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.5, 5.0);
    for (int i = 0; i < 20; ++i) {
        const double al = U(rng), be = U(rng);
        const double q = q_closed(p2, DensitySpec::beta(al, be));
        CHECK(std::abs(q - (1.0 - beta_moment(al, be, 2.0))) <= 1e-12);
        CHECK(std::abs(q - q_power2_rational(al, be)) <= 1e-12);
    }
    CHECK_THROWS(q_closed(default_example_params(6), DensitySpec::beta(2, 2)));
}

TEST_CASE("modified beta mean") {
    CHECK(modified_beta_mean(1, 1, 0, 1) == doctest::Approx(0.5));
    CHECK(modified_beta_mean(2, 3, 0, 1) == doctest::Approx(0.4));
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(0.5, 5.0);
    for (int i = 0; i < 10; ++i) {
        const double al = U(rng), be = U(rng), a = U(rng) - 3.0, b = a + U(rng);
        const double ref = a + (b - a) * al / (al + be);
        CHECK(modified_beta_mean(al, be, a, b) == doctest::Approx(ref).epsilon(1e-13));
        const DensitySpec g = DensitySpec::modified_beta(al, be, a, b);
        const double quad =
            quad::piecewise_ends([&](double x, double l, double h) { return x * g.pdf(x, l, h); }, {a, b});
        CHECK(std::abs(quad - ref) <= 1e-10);
    }
}
