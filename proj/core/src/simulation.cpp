#include "wavebench/simulation.hpp"

#include <cmath>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "wavebench/errors.hpp"

namespace wavebench {

namespace {

enum Stream : std::uint64_t { kInit = 1, kLevel, kSlope, kSeasonal, kNoise };

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw ConfigError(msg);
    }
}

bool nonneg(double v) { return v >= 0.0 && std::isfinite(v); }

class Normal {
public:
    Normal(std::int64_t seed, Stream stream) : engine_(static_cast<std::uint64_t>(seed), stream) {}
    double operator()(double sd) { return sd == 0.0 ? 0.0 * dist_(engine_) : sd * dist_(engine_); }

private:
    SplitMix64 engine_;
    boost::random::normal_distribution<double> dist_;
};

} // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

SplitMix64::result_type SplitMix64::operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
}

void SimulationParams::validate() const {
    require(k >= 1, "k must be >= 1");
    require(m >= 1, "m must be >= 1");
    require(n == k * m, "n must equal k * m (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                            ", m=" + std::to_string(m) + ")");
    require(p >= 0, "p must be >= 0");
    require(std::abs(phi) < 1.0, "|phi| must be < 1");
    require(std::abs(theta) < 1.0, "|theta| must be < 1");
    require(sigma_gamma_init.size() == static_cast<std::size_t>(k - 1),
            "expected " + std::to_string(k - 1) + " initial seasonal deviations, got " +
                std::to_string(sigma_gamma_init.size()));
    for (double s : sigma_gamma_init) {
        require(nonneg(s), "initial seasonal deviations must be non-negative");
    }
    for (double s : {sigma_mu1, sigma_upsilon1, sigma_phi, sigma_zeta, sigma_omega, sigma_tau}) {
        require(nonneg(s), "standard deviations must be finite and non-negative");
    }
}

double SimulationParams::noise_variance() const {
    const double s2 = sigma_tau * sigma_tau;
    if (noise_model == NoiseModel::ScaledAr1) {
        return theta * theta * s2 / (1.0 - phi * phi);
    }
    return s2 * (1.0 + 2.0 * phi * theta + theta * theta) / (1.0 - phi * phi);
}

SimTriple simulate(const SimulationParams& params, std::int64_t seed, int extra_blocks) {
    params.validate();
    if (extra_blocks < 0) {
        throw ConfigError("extra_blocks must be >= 0");
    }
    const int k = params.k;
    const int blocks = params.m + extra_blocks;
    const auto total = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(k);

    Normal init(seed, kInit);
    Normal level_rng(seed, kLevel);
    Normal slope_rng(seed, kSlope);
    Normal seasonal_rng(seed, kSeasonal);
    Normal noise_rng(seed, kNoise);

    double mu = init(params.sigma_mu1);
    double upsilon = init(params.sigma_upsilon1);
    std::vector<double> gamma(total, 0.0);
    for (int i = 0; i + 1 < k && static_cast<std::size_t>(i) < total; ++i) {
        gamma[static_cast<std::size_t>(i)] = init(params.sigma_gamma_init[static_cast<std::size_t>(i)]);
    }
    for (std::size_t t = static_cast<std::size_t>(k - 1); t < total; ++t) {
        double acc = 0.0;
        for (int i = 1; i < k; ++i) {
            acc += gamma[t - static_cast<std::size_t>(i)];
        }
        gamma[t] = -acc + seasonal_rng(params.sigma_omega);
    }

    std::vector<double> truth(total);
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) {
            upsilon += slope_rng(params.sigma_zeta);
            mu += upsilon + level_rng(params.sigma_phi);
        }
        truth[t] = mu + gamma[t];
    }

    std::vector<double> observed(total);
    const double phi = params.phi;
    const double theta = params.theta;
    const double sd = params.sigma_tau;
    double eps = 0.0;
    double tau_prev = 0.0;
    if (params.noise_model == NoiseModel::ScaledAr1) {
        eps = noise_rng(std::abs(theta) * sd / std::sqrt(1.0 - phi * phi));
    } else {
        // Stationary (e_0, tau_0): e_0 - tau_0 is independent of tau_0.
        tau_prev = noise_rng(sd);
        eps = tau_prev + noise_rng(sd * std::abs(phi + theta) / std::sqrt(1.0 - phi * phi));
    }
    for (std::size_t t = 0; t < total; ++t) {
        const double tau = noise_rng(sd);
        if (params.noise_model == NoiseModel::ScaledAr1) {
            eps = t == 0 ? eps : phi * eps + theta * tau;
        } else {
            eps = phi * eps + tau + theta * tau_prev;
            tau_prev = tau;
        }
        observed[t] = truth[t] + eps;
    }

    TimeSeries true_high(std::move(truth), 1, k);
    TimeSeries obs_low = aggregate(true_high, AggregationConstraint(k));
    return {std::move(true_high), TimeSeries(std::move(observed), 1, k), std::move(obs_low)};
}

std::vector<SimTriple> simulate_batch(const SimulationParams& params,
                                      int n_reps,
                                      std::int64_t base_seed,
                                      int extra_blocks) {
    if (n_reps < 1) {
        throw ConfigError("n_reps must be >= 1");
    }
    std::vector<SimTriple> out;
    out.reserve(static_cast<std::size_t>(n_reps));
    for (int r = 0; r < n_reps; ++r) {
        out.push_back(simulate(params, base_seed + r, extra_blocks));
    }
    return out;
}

} // namespace wavebench
