#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wavebench/classical.hpp"
#include "wavebench/series.hpp"
#include "wavebench/wavelet_benchmark.hpp"

namespace wavebench {

struct MethodOptions {
    DagumCholetteConfig dagum_cholette;
    bool seasonal = true;     // wavelet: adjust with period k first
    bool thresholding = true; // wavelet: shrink within-block levels
    VarianceFitOptions fit_options;
};

// original | denton1 | denton2 | dc | elementary | wavelet
Method parse_method(std::string_view id);
std::string method_id(const Method& method);

// Comma-separated list of method ids; empty entries are rejected.
std::vector<Method> parse_method_list(std::string_view list);

// Every method, in report order: original, denton1, denton2, dc, elementary, wavelet.
std::vector<Method> all_methods();

BenchmarkResult run_method(const Method& method,
                           const TimeSeries& high,
                           const TimeSeries& low,
                           AggregationConstraint c,
                           const MethodOptions& options = {});

} // namespace wavebench
