#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wavebench/methods.hpp"
#include "wavebench/simulation.hpp"

namespace wavebench {

struct StudyConfig {
    SimulationParams params;
    std::vector<Method> methods = all_methods();
    int reps = 500;
    std::int64_t seed = 1;
    MethodOptions options;
    bool revisions = true; // also benchmark the p extended vintages
};

struct MethodSummary {
    Method method;
    double mean_mse = 0.0;
    double revision_metric = 0.0; // mean over replicates; 0 when revisions are off
    std::vector<double> mses;      // per replicate, in replicate order
    std::vector<double> revisions; // per replicate
};

struct StudyReport {
    std::vector<MethodSummary> rows; // in the order methods were requested
    int reps = 0;
};

/// Simulates `reps` replicates (seed, seed + 1, ...) and benchmarks each one
/// with every method. MSE is measured on the first n points against the true
/// series; for revisions each replicate is also benchmarked with r = 1..p
/// extra low blocks and compared on the base's last block.
StudyReport run_study(const StudyConfig& cfg, const std::function<void(int)>& on_replicate = {});

} // namespace wavebench
