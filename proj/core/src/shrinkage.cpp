#include "wavebench/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wavebench/errors.hpp"

namespace wavebench {

double soft_threshold(double w, double lambda) {
    if (!(lambda >= 0.0)) {
        throw DomainError("threshold must be non-negative, got " + std::to_string(lambda));
    }
    const double magnitude = std::abs(w) - lambda;
    if (magnitude <= 0.0) {
        return 0.0;
    }
    return std::copysign(magnitude, w);
}

std::vector<double> haar_modwt(std::span<const double> series, int level) {
    if (level < 1 || level > 30) {
        throw DomainError("MODWT level must be in [1, 30], got " + std::to_string(level));
    }
    const auto n = static_cast<std::ptrdiff_t>(series.size());
    const std::ptrdiff_t width = std::ptrdiff_t{1} << level;
    const std::ptrdiff_t half = width / 2;
    const double weight = 1.0 / static_cast<double>(width);
    std::vector<double> out(series.size());
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::ptrdiff_t l = 0; l < width; ++l) {
            const std::ptrdiff_t idx = ((t - l) % n + n) % n;
            acc += (l < half ? 1.0 : -1.0) * series[static_cast<std::size_t>(idx)];
        }
        out[static_cast<std::size_t>(t)] = weight * acc;
    }
    return out;
}

LevelNoiseEstimate modwt_level_variance(std::span<const double> series, int level) {
    if (level < 1) {
        throw DomainError("MODWT level must be >= 1, got " + std::to_string(level));
    }
    const auto n = static_cast<std::ptrdiff_t>(series.size());
    const std::ptrdiff_t width = std::ptrdiff_t{1} << level;
    if (n <= width) {
        throw DimensionError("series of length " + std::to_string(n) + " is too short for MODWT level " +
                             std::to_string(level));
    }
    const auto coeffs = haar_modwt(series, level);
    double energy = 0.0;
    for (std::ptrdiff_t t = width - 1; t < n; ++t) {
        energy += coeffs[static_cast<std::size_t>(t)] * coeffs[static_cast<std::size_t>(t)];
    }
    const auto used = static_cast<int>(n - width + 1);
    return {level, static_cast<double>(width) * energy / used, used};
}

LevelNoiseEstimate modwt_level_variance(const TimeSeries& series, int level) {
    return modwt_level_variance(series.values(), level);
}

double sure_risk(std::span<const double> coeffs, double sigma2, double lambda) {
    double risk = 0.0;
    for (double w : coeffs) {
        const double a = std::abs(w);
        risk += sigma2 - (a <= lambda ? 2.0 * sigma2 : 0.0) + std::min(w * w, lambda * lambda);
    }
    return risk;
}

double sure_lambda(std::span<const double> coeffs, double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw DomainError("SURE needs a positive noise variance, got " + std::to_string(sigma2));
    }
    if (coeffs.empty()) {
        throw DimensionError("SURE needs at least one coefficient");
    }
    std::vector<double> sorted(coeffs.size());
    std::transform(coeffs.begin(), coeffs.end(), sorted.begin(), [](double w) { return std::abs(w); });
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();

    // risk(lambda) = n sigma2 - 2 sigma2 #{a <= lambda} + sum_{a <= lambda} a^2 + #{a > lambda} lambda^2
    auto risk_at = [&](double lambda, std::size_t below, double below_energy) {
        return static_cast<double>(n) * sigma2 - 2.0 * sigma2 * static_cast<double>(below) + below_energy +
               static_cast<double>(n - below) * lambda * lambda;
    };

    std::size_t zeros = 0;
    while (zeros < n && sorted[zeros] == 0.0) {
        ++zeros;
    }
    double best_lambda = 0.0;
    double best_risk = risk_at(0.0, zeros, 0.0);
    double energy = 0.0;
    for (std::size_t i = 0; i < n;) {
        const double a = sorted[i];
        std::size_t j = i;
        while (j < n && sorted[j] == a) {
            energy += a * a;
            ++j;
        }
        const double risk = risk_at(a, j, energy);
        if (risk < best_risk) {
            best_risk = risk;
            best_lambda = a;
        }
        i = j;
    }
    return best_lambda;
}

ThresholdPlan plan_thresholds(const WaveletCoefficients& coeffs,
                              const std::set<int>& levels,
                              const std::map<int, LevelNoiseEstimate>& noise) {
    ThresholdPlan plan;
    for (int level : levels) {
        const auto it = noise.find(level);
        if (it == noise.end()) {
            throw ConfigError("no noise estimate for wavelet level " + std::to_string(level));
        }
        const auto values = coeffs.level_values(level);
        if (values.empty() || it->second.sigma2 <= 0.0) {
            plan.lambda_by_level[level] = 0.0;
            continue;
        }
        plan.lambda_by_level[level] = sure_lambda(values, it->second.sigma2);
    }
    return plan;
}

WaveletCoefficients apply_thresholds(const WaveletCoefficients& coeffs, const ThresholdPlan& plan) {
    WaveletCoefficients out = coeffs;
    for (auto& [key, value] : out.details) {
        const auto it = plan.lambda_by_level.find(key.level);
        if (it != plan.lambda_by_level.end()) {
            value = soft_threshold(value, it->second);
        }
    }
    return out;
}

WaveletCoefficients threshold_details(const WaveletCoefficients& coeffs,
                                      const std::set<int>& levels,
                                      const std::map<int, LevelNoiseEstimate>& noise) {
    return apply_thresholds(coeffs, plan_thresholds(coeffs, levels, noise));
}

} // namespace wavebench
