#include "wavebench/methods.hpp"

#include "wavebench/errors.hpp"

namespace wavebench {

Method parse_method(std::string_view id) {
    if (id == "original") {
        return Method::original();
    }
    if (id == "denton1") {
        return Method::denton(1);
    }
    if (id == "denton2") {
        return Method::denton(2);
    }
    if (id == "dc") {
        return Method::dagum_cholette();
    }
    if (id == "elementary") {
        return Method::elementary();
    }
    if (id == "wavelet") {
        return Method::wavelet();
    }
    throw ConfigError("unknown method '" + std::string(id) + "'");
}

std::string method_id(const Method& method) {
    switch (method.kind) {
    case MethodKind::Original:
        return "original";
    case MethodKind::Denton:
        return "denton" + std::to_string(method.denton_order);
    case MethodKind::DagumCholette:
        return "dc";
    case MethodKind::ElementaryWavelet:
        return "elementary";
    case MethodKind::Wavelet:
        return "wavelet";
    }
    return "unknown";
}

std::vector<Method> parse_method_list(std::string_view list) {
    std::vector<Method> out;
    if (list.find_first_not_of(' ') == std::string_view::npos) {
        throw ConfigError("empty method list");
    }
    while (!list.empty()) {
        const auto comma = list.find(',');
        auto item = list.substr(0, comma);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        if (item.empty()) {
            throw ConfigError("empty entry in method list");
        }
        out.push_back(parse_method(item));
        if (comma == std::string_view::npos) {
            break;
        }
        list.remove_prefix(comma + 1);
        if (list.empty()) {
            throw ConfigError("empty entry in method list");
        }
    }
    return out;
}

std::vector<Method> all_methods() {
    return {Method::original(),       Method::denton(1),    Method::denton(2),
            Method::dagum_cholette(), Method::elementary(), Method::wavelet()};
}

BenchmarkResult run_method(const Method& method,
                           const TimeSeries& high,
                           const TimeSeries& low,
                           AggregationConstraint c,
                           const MethodOptions& options) {
    switch (method.kind) {
    case MethodKind::Original:
        return original_benchmark(high, low, c);
    case MethodKind::Denton:
        return denton_benchmark(high, low, c, DentonConfig{method.denton_order});
    case MethodKind::DagumCholette:
        return dagum_cholette_benchmark(high, low, c, options.dagum_cholette);
    case MethodKind::ElementaryWavelet:
        return elementary_benchmark(high, low, c);
    case MethodKind::Wavelet: {
        WaveletBenchmarkConfig cfg;
        cfg.apply_thresholding = options.thresholding;
        if (options.seasonal) {
            cfg.seasonal_period = c.factor_k();
        }
        cfg.fit_options = options.fit_options;
        return wavelet_benchmark(high, low, c, cfg);
    }
    }
    throw ConfigError("unsupported method");
}

} // namespace wavebench
