#include "wavebench/wavelet_benchmark.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wavebench/errors.hpp"
#include "wavebench/shrinkage.hpp"

namespace wavebench {

double replacement_scale(int k) {
    if (k < 2) {
        throw ConfigError("replacement needs k >= 2, got " + std::to_string(k));
    }
    return std::sqrt(static_cast<double>(k));
}

void replace_coarse_coefficients(WaveletCoefficients& high,
                                 const WaveletCoefficients& low,
                                 const UHBasis& low_basis,
                                 int k) {
    const double inv = 1.0 / replacement_scale(k);
    high.father = inv * low.father;
    for (const auto& node : low_basis.nodes()) {
        const auto key = node.key();
        const auto src = low.details.find(key);
        auto dst = high.details.find(key);
        if (src == low.details.end() || dst == high.details.end()) {
            throw DimensionError("coefficient (" + std::to_string(key.level) + ", " + std::to_string(key.index) +
                                 ") is missing from a paired transform");
        }
        dst->second = inv * src->second;
    }
}

namespace {

// k == 1 leaves no freedom: the benchmarked series is the low series.
TimeSeries copy_low(const TimeSeries& high, const TimeSeries& low) {
    return high.with_values(std::vector<double>(low.values().begin(), low.values().end()));
}

WaveletCoefficients replaced(const TimeSeries& high, const TimeSeries& low, const PairedBases& bases, int k) {
    WaveletCoefficients hc = duht(high, bases.high);
    const WaveletCoefficients lc = duht(low, bases.low);
    replace_coarse_coefficients(hc, lc, bases.low, k);
    return hc;
}

} // namespace

BenchmarkResult elementary_benchmark(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c) {
    check_paired(high, low, c);
    const auto k = static_cast<std::size_t>(c.factor_k());
    std::vector<double> out(high.values().begin(), high.values().end());
    for (std::size_t s = 0; s < low.size(); ++s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            sum += out[s * k + i];
        }
        const double shift = (low[s] - sum) / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            out[s * k + i] += shift;
        }
    }
    return make_result(high.with_values(std::move(out)), Method::elementary(), low, c);
}

BenchmarkResult elementary_benchmark_by_replacement(const TimeSeries& high,
                                                    const TimeSeries& low,
                                                    AggregationConstraint c) {
    check_paired(high, low, c);
    const int k = c.factor_k();
    if (k == 1) {
        return make_result(copy_low(high, low), Method::elementary(), low, c);
    }
    const auto bases = build_paired_bases(static_cast<int>(low.size()), k);
    const auto hc = replaced(high, low, bases, k);
    return make_result(iduht(hc, bases.high), Method::elementary(), low, c);
}

BenchmarkResult wavelet_benchmark(const TimeSeries& high,
                                  const TimeSeries& low,
                                  AggregationConstraint c,
                                  const WaveletBenchmarkConfig& cfg) {
    check_paired(high, low, c);
    const int k = c.factor_k();
    if (cfg.seasonal_period && *cfg.seasonal_period != k) {
        throw ConfigError("seasonal period " + std::to_string(*cfg.seasonal_period) +
                          " must equal the aggregation factor " + std::to_string(k));
    }
    if (k == 1) {
        return make_result(copy_low(high, low), Method::wavelet(), low, c);
    }

    std::optional<TimeSeries> gamma;
    TimeSeries working = high;
    if (cfg.seasonal_period) {
        auto adj = seasonal_adjust(high, k, cfg.fit_options);
        working = std::move(adj.adjusted);
        gamma = std::move(adj.gamma_hat);
    }

    const auto bases = build_paired_bases(static_cast<int>(low.size()), k);
    WaveletCoefficients hc = replaced(working, low, bases, k);

    if (cfg.apply_thresholding) {
        const int depth = bases.high.max_level();
        std::set<int> levels;
        std::map<int, LevelNoiseEstimate> noise;
        for (int j = bases.split_level + 1; j <= depth; ++j) {
            levels.insert(j);
            const int modwt_level = depth + 1 - j;
            if (working.size() > (std::size_t{1} << modwt_level)) {
                auto est = modwt_level_variance(working, modwt_level);
                est.level_j = j;
                noise[j] = est;
            } else {
                noise[j] = {j, 0.0, 0}; // too short to estimate; leave the level untouched
            }
        }
        hc = threshold_details(hc, levels, noise);
    }

    std::vector<double> out = iduht_values(hc, bases.high);
    if (gamma) {
        for (std::size_t t = 0; t < out.size(); ++t) {
            out[t] += (*gamma)[t];
        }
    }
    return make_result(high.with_values(std::move(out)), Method::wavelet(), low, c, std::move(gamma));
}

} // namespace wavebench
