#include "fpp/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "fpp/random.hpp"

namespace fpp {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidParameter("dt > 0 violated");
    if (n_paths < 1) throw InvalidParameter("n_paths >= 1 violated");
    if (max_time < 0.0) throw InvalidParameter("max_time must be >= 0 (0 = heuristic)");
}

double default_max_time(const ProcessSpec& spec) {
    const Interval I = spec.interval;
    double min_s2 = std::numeric_limits<double>::infinity();
    for (int i = 1; i < 100; ++i) {
        min_s2 = std::min(min_s2, spec.diffusion.squared(I.a + I.length() * i / 100.0));
    }
    const double horizon = 100.0 * I.length() * I.length() / std::max(min_s2, 1e-300);
    return std::min(horizon, 1e4);
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FPP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

const char* to_string(ExitSide side) {
    switch (side) {
        case ExitSide::Left: return "left";
        case ExitSide::Right: return "right";
        case ExitSide::Censored: return "censored";
    }
    return "?";
}

namespace {

double exponential(PathRng& rng, double rate) {
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return -std::log(rng.uniform_open()) / rate;
}

ExitSample run_path(const ProcessSpec& spec, double x0, double dt, double horizon, PathRng& rng) {
    const Interval I = spec.interval;
    ExitSample out;
    out.start = x0;
    double x = x0;
    double t = 0.0;
    const auto exited = [&](double y) {
        if (y <= I.a) {
            out.side = ExitSide::Left;
        } else if (y >= I.b) {
            out.side = ExitSide::Right;
        } else {
            return false;
        }
        out.time = t;
        out.place = y;
        return true;
    };
    if (exited(x)) return out;

    NormalSampler normal;
    double next_up = exponential(rng, spec.up_jumps.rate);
    double next_down = exponential(rng, spec.down_jumps.rate);
    while (t < horizon) {
        const double target = std::min({t + dt, next_up, next_down, horizon});
        const double step = target - t;
        x += spec.drift(x) * step + std::sqrt(spec.diffusion.squared(x) * step) * normal(rng);
        t = target;
        if (exited(x)) return out;
        // kernels see the pre-jump state X(t-)
        if (t == next_up) {
            x += spec.up_jumps.kernel.sample(x, rng.uniform());
            next_up = t + exponential(rng, spec.up_jumps.rate);
            if (exited(x)) return out;
        }
        if (t == next_down) {
            x += spec.down_jumps.kernel.sample(x, rng.uniform());
            next_down = t + exponential(rng, spec.down_jumps.rate);
            if (exited(x)) return out;
        }
    }
    out.side = ExitSide::Censored;
    out.time = t;
    out.place = x;
    return out;
}

double horizon_for(const ProcessSpec& spec, const SimConfig& cfg) {
    return cfg.max_time > 0.0 ? cfg.max_time : default_max_time(spec);
}

void check_start(const ProcessSpec& spec, double x0) {
    if (!(x0 >= spec.interval.a && x0 <= spec.interval.b)) {
        throw InvalidParameter("start point " + std::to_string(x0) + " outside [a, b]");
    }
}

}  // namespace

ExitSample simulate_exit(const ProcessSpec& spec, double x0, const SimConfig& cfg,
                         std::uint64_t path_index) {
    cfg.validate();
    check_start(spec, x0);
    PathRng rng(cfg.seed, path_index);
    return run_path(spec, x0, cfg.dt, horizon_for(spec, cfg), rng);
}

ExitSample simulate_exit(const ProcessSpec& spec, const DensitySpec& g, const SimConfig& cfg,
                         std::uint64_t path_index) {
    cfg.validate();
    PathRng rng(cfg.seed, path_index);
    const double x0 = sample_density(rng, g);
    return run_path(spec, x0, cfg.dt, horizon_for(spec, cfg), rng);
}

nlohmann::json EstimateWithError::to_json(const SimConfig& cfg) const {
    return {
        {"p_hat", p_hat},
        {"se", std_error},
        {"n", n},
        {"left", left_count},
        {"censored", censored_count},
        {"reliable", reliable},
        {"config", {{"dt", cfg.dt}, {"paths", cfg.n_paths}, {"seed", cfg.seed},
                    {"max_time", cfg.max_time}}},
    };
}

EstimateWithError estimate_pia(const ProcessSpec& spec, const StartSpec& start,
                               const SimConfig& cfg, std::vector<ExitSample>* samples) {
    cfg.validate();
    spec.validate();
    if (const auto* x0 = std::get_if<double>(&start)) {
        check_start(spec, *x0);
    } else {
        const Interval s = std::get<DensitySpec>(start).support();
        if (s.a < spec.interval.a || s.b > spec.interval.b) {
            throw InvalidParameter("start density support not inside [a, b]");
        }
    }
    const double horizon = horizon_for(spec, cfg);
    const std::size_t n = cfg.n_paths;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(cfg.threads), n));
    if (samples) samples->assign(n, ExitSample{});

    struct Counts {
        std::size_t left = 0;
        std::size_t censored = 0;
    };
    std::vector<Counts> counts(workers);
    const auto work = [&](unsigned w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        Counts c;
        for (std::size_t p = begin; p < end; ++p) {
            PathRng rng(cfg.seed, p);
            const double x0 = std::holds_alternative<double>(start)
                                  ? std::get<double>(start)
                                  : sample_density(rng, std::get<DensitySpec>(start));
            const ExitSample s = run_path(spec, x0, cfg.dt, horizon, rng);
            if (s.side == ExitSide::Left) ++c.left;
            if (s.side == ExitSide::Censored) ++c.censored;
            if (samples) (*samples)[p] = s;
        }
        counts[w] = c;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    EstimateWithError est;
    est.n = n;
    for (const Counts& c : counts) {
        est.left_count += c.left;
        est.censored_count += c.censored;
    }
    const std::size_t effective = n - est.censored_count;
    if (effective > 0) {
        est.p_hat = static_cast<double>(est.left_count) / static_cast<double>(effective);
        est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(effective));
    }
    est.reliable = effective > 0 && static_cast<double>(est.censored_count) <= 0.01 * n;
    return est;
}

void write_samples_csv(std::ostream& os, const std::vector<ExitSample>& samples) {
    const auto old = os.precision(17);
    os << "path,start,side,time,place\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ExitSample& s = samples[i];
        os << i << ',' << s.start << ',' << to_string(s.side) << ',' << s.time << ',' << s.place
           << '\n';
    }
    os.precision(old);
}

}  // namespace fpp
