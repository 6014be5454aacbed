#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "wavebench/series.hpp"

namespace wavebench {

enum class NoiseModel {
    // e_t = phi e_{t-1} + theta tau_t
    ScaledAr1,
    // e_t = phi e_{t-1} + tau_t + theta tau_{t-1}
    Arma11,
};

struct SimulationParams {
    double sigma_mu1 = 1.0;
    double sigma_upsilon1 = 1.0;
    std::vector<double> sigma_gamma_init{1.0, 1.0, 1.0}; // gamma_1 .. gamma_{k-1}
    double phi = 0.2;
    double theta = 0.5;
    double sigma_phi = 1.0;   // level disturbance
    double sigma_zeta = 0.25; // slope disturbance
    double sigma_omega = 3.0; // seasonal disturbance
    double sigma_tau = 96.4;  // observation noise innovation
    int m = 64;
    int n = 256;
    int k = 4;
    int p = 4;
    NoiseModel noise_model = NoiseModel::ScaledAr1;

    // Throws ConfigError on any violated invariant.
    void validate() const;
    // Stationary variance of the observation noise.
    double noise_variance() const;
};

struct SimTriple {
    TimeSeries true_high;
    TimeSeries obs_high;
    TimeSeries obs_low;
};

/// Counter-based generator: splitmix64 over a 64-bit counter whose start is
/// derived from (seed, stream). Output depends only on the key and the draw
/// number, so every platform sees the same stream.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    SplitMix64(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

private:
    std::uint64_t state_;
};

/// One replicate of the structural model with (m + extra_blocks) * k high
/// points; the last extra_blocks blocks serve as later data vintages. Each
/// component (initial values, level, slope, seasonal, noise) has its own
/// stream, so a longer simulation extends a shorter one with the same seed.
SimTriple simulate(const SimulationParams& params, std::int64_t seed, int extra_blocks = 0);

// Replicate r uses seed base_seed + r.
std::vector<SimTriple> simulate_batch(const SimulationParams& params,
                                      int n_reps,
                                      std::int64_t base_seed,
                                      int extra_blocks = 0);

} // namespace wavebench
