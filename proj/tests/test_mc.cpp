#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fpp/closed_forms.hpp"
#include "fpp/mc.hpp"
#include "fpp/random.hpp"

using namespace fpp;

namespace {

ProcessSpec brownian() {
    ProcessSpec s;
    s.diffusion = CoefficientField::constant(1.0);
    s.interval = Interval(0.0, 1.0);
    return s;
}

bool same(const std::vector<ExitSample>& l, const std::vector<ExitSample>& r) {
    if (l.size() != r.size()) return false;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i].side != r[i].side || l[i].time != r[i].time || l[i].place != r[i].place ||
            l[i].start != r[i].start)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("path streams are reproducible and distinct") {
    PathRng a(5, 17), b(5, 17), c(5, 18);
    for (int i = 0; i < 10; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    PathRng u(1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform_open();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("gamma and beta samplers match their moments") {
    PathRng rng(3, 0);
    for (double shape : {0.4, 1.0, 3.5}) {
        double s = 0.0, s2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double g = sample_gamma(rng, shape);
            s += g;
            s2 += g * g;
        }
        const double mean = s / n, var = s2 / n - mean * mean;
        CHECK(std::abs(mean - shape) <= 5.0 * std::sqrt(shape / n));
        CHECK(var == doctest::Approx(shape).epsilon(0.05));
    }
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) s += sample_beta(rng, 2.0, 3.0);
    CHECK(std::abs(s / n - 0.4) <= 5.0 * std::sqrt(0.04 / n));
}

TEST_CASE("results do not depend on the worker count") {
    const ExampleParams p = default_example_params(7);
    const ProcessSpec spec = build_example(7, p);
    SimConfig cfg;
    cfg.n_paths = 3000;
    cfg.dt = 1e-3;
    cfg.seed = 99;
    std::vector<std::vector<ExitSample>> runs;
    std::vector<EstimateWithError> ests;
    for (unsigned w : {1u, 2u, 4u}) {
        cfg.threads = w;
        std::vector<ExitSample> s;
        ests.push_back(estimate_pia(spec, p.epsilon, cfg, &s));
        runs.push_back(std::move(s));
    }
    CHECK(same(runs[0], runs[1]));
    CHECK(same(runs[0], runs[2]));
    CHECK(ests[0].p_hat == ests[2].p_hat);

    cfg.threads = 3;
    const DensitySpec g = DensitySpec::uniform(0.0, 1.0);
    std::vector<ExitSample> a, b;
    estimate_pia(spec, g, cfg, &a);
    cfg.threads = 1;
    estimate_pia(spec, g, cfg, &b);
    CHECK(same(a, b));
}

TEST_CASE("exit samples respect the exit side") {
    for (int id = 1; id <= 7; ++id) {
        const ProcessSpec spec = build_example(id, default_example_params(id));
        SimConfig cfg;
        cfg.n_paths = 500;
        cfg.dt = 1e-3;
        std::vector<ExitSample> samples;
        estimate_pia(spec, 0.5 * (spec.interval.a + spec.interval.b), cfg, &samples);
        for (const auto& s : samples) {
            if (s.side == ExitSide::Left) CHECK(s.place <= spec.interval.a);
            if (s.side == ExitSide::Right) CHECK(s.place >= spec.interval.b);
            if (s.side != ExitSide::Censored) CHECK(s.time > 0.0);
        }
    }
}

TEST_CASE("Example 6 jumps of size 4 exit on the right") {
    const ProcessSpec spec = build_example(6, default_example_params(6));
    SimConfig cfg;
    cfg.n_paths = 2000;
    cfg.dt = 1e-3;
    std::vector<ExitSample> samples;
    estimate_pia(spec, 0.5, cfg, &samples);
    std::size_t jumped = 0;
    for (const auto& s : samples) {
        if (s.side == ExitSide::Right && s.place > 2.0) {
            ++jumped;
            CHECK(s.place - 4.0 > 0.0);
            CHECK(s.place - 4.0 < 1.0);
        }
    }
    CHECK(jumped > 0);
}

TEST_CASE("standard error formula and degenerate runs") {
    SimConfig cfg;
    cfg.n_paths = 1;
    const auto one = estimate_pia(brownian(), 0.5, cfg);
    CHECK((one.p_hat == 0.0 || one.p_hat == 1.0));
    CHECK(one.std_error == 0.0);

    cfg.n_paths = 4000;
    cfg.dt = 1e-3;
    const auto e = estimate_pia(brownian(), 0.3, cfg);
    const double n = static_cast<double>(e.n - e.censored_count);
    CHECK(e.std_error == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / n)).epsilon(1e-14));
    CHECK(e.left_count == static_cast<std::size_t>(std::llround(e.p_hat * n)));
}

TEST_CASE("censoring makes an estimate unreliable") {
    SimConfig cfg;
    cfg.n_paths = 200;
    cfg.dt = 1e-3;
    cfg.max_time = 0.01;
    const auto e = estimate_pia(brownian(), 0.5, cfg);
    CHECK(e.censored_count > 2);
    CHECK_FALSE(e.reliable);
}

TEST_CASE("invalid configurations are rejected") {
    SimConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS(estimate_pia(brownian(), 0.5, cfg));
    cfg = SimConfig{};
    cfg.n_paths = 0;
    CHECK_THROWS(estimate_pia(brownian(), 0.5, cfg));
    CHECK_THROWS(estimate_pia(brownian(), 1.5, SimConfig{}));
}

TEST_CASE("seed reruns stay within 3 SE of the Brownian midpoint") {
    // 100 independent seeds; at most 1 excursion allowed (expected 0.27)
    SimConfig cfg;
    cfg.n_paths = 1000;
    cfg.dt = 1e-3;
    cfg.threads = 1;
    int outside = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.seed = seed;
        const auto e = estimate_pia(brownian(), 0.5, cfg);
        if (std::abs(e.p_hat - 0.5) > 3.0 * e.std_error) ++outside;
    }
    CHECK(outside <= 1);
}

TEST_CASE("dt refinement at the Brownian midpoint") {
    SimConfig coarse;
    coarse.n_paths = 20000;
    coarse.dt = 1e-3;
    SimConfig fine = coarse;
    fine.dt = coarse.dt / 4.0;
    fine.seed = 2;
    const auto a = estimate_pia(brownian(), 0.5, coarse);
    const auto b = estimate_pia(brownian(), 0.5, fine);
    const double band = 3.0 * std::hypot(a.std_error, b.std_error) + coarse.dt;
    CHECK(std::abs(a.p_hat - b.p_hat) <= band);
}

TEST_CASE("random starts reproduce the integrated probability") {
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.dt = 1e-4;
    const ExampleParams p1 = default_example_params(1);
    const auto e1 = estimate_pia(build_example(1, p1), DensitySpec::modified_beta(1, 1, 0, 1), cfg);
    CHECK(std::abs(e1.p_hat - 0.5) <= 3.0 * e1.std_error);

    ExampleParams p6 = default_example_params(6);
    p6.lambda1 = 0.01;
    const auto e6 = estimate_pia(build_example(6, p6), DensitySpec::uniform(0, 1), cfg);
    CHECK(std::abs(e6.p_hat - 2.0 / std::numbers::pi) <= 3.0 * e6.std_error);
}

TEST_CASE("samples csv header") {
    std::ostringstream os;
    write_samples_csv(os, {ExitSample{ExitSide::Left, 0.5, -0.01, 0.3}});
    CHECK(os.str().rfind("path,start,side,time,place\n", 0) == 0);
}
