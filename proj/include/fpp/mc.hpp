#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fpp/model.hpp"

namespace fpp {

struct SimConfig {
    double dt = 1e-4;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    /// Safety horizon; 0 selects 100 (b - a)^2 / min sigma^2 (capped at 1e4).
    double max_time = 0.0;
    /// Worker count; 0 reads FPP_THREADS, then hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

/// Horizon used when cfg.max_time is 0.
double default_max_time(const ProcessSpec& spec);

/// Worker count resolved from cfg.threads / FPP_THREADS.
unsigned resolve_threads(unsigned requested);

enum class ExitSide { Left, Right, Censored };

const char* to_string(ExitSide side);

struct ExitSample {
    ExitSide side = ExitSide::Censored;
    double time = 0.0;
    double place = 0.0;
    double start = 0.0;
};

/// Euler-Maruyama between exponential jump epochs, until X <= a or X >= b.
/// Path `path_index` always draws from the same random stream.
ExitSample simulate_exit(const ProcessSpec& spec, double x0, const SimConfig& cfg,
                         std::uint64_t path_index);

/// Same, with the start drawn from `g` on the path's own stream.
ExitSample simulate_exit(const ProcessSpec& spec, const DensitySpec& g, const SimConfig& cfg,
                         std::uint64_t path_index);

struct EstimateWithError {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::size_t left_count = 0;
    std::size_t censored_count = 0;
    /// False when more than 1% of the paths were censored.
    bool reliable = true;

    nlohmann::json to_json(const SimConfig& cfg) const;
};

using StartSpec = std::variant<double, DensitySpec>;

/// Fraction of non-censored paths leaving on the left, with standard error
/// sqrt(p (1 - p) / n_effective).
EstimateWithError estimate_pia(const ProcessSpec& spec, const StartSpec& start,
                               const SimConfig& cfg, std::vector<ExitSample>* samples = nullptr);

/// Columns: path,start,side,time,place
void write_samples_csv(std::ostream& os, const std::vector<ExitSample>& samples);

}  // namespace fpp
