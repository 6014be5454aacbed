#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavebench/config.hpp"
#include "wavebench/csv.hpp"
#include "wavebench/errors.hpp"
#include "wavebench/methods.hpp"
#include "wavebench/simulation.hpp"
#include "wavebench/study.hpp"
#include "wavebench/uh_wavelet.hpp"

#ifndef WAVEBENCH_VERSION
#define WAVEBENCH_VERSION "unknown"
#endif
#ifndef WAVEBENCH_BUILD_TYPE
#define WAVEBENCH_BUILD_TYPE ""
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wavebench;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

// Bad command line after CLI11 accepted it (e.g. a method id it cannot know).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DomainError("cannot write " + path.string());
    }
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DomainError("cannot create directory " + dir.string());
    }
}

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

json params_json(const SimulationParams& p) {
    json j;
    j["sigma_mu1"] = p.sigma_mu1;
    j["sigma_upsilon1"] = p.sigma_upsilon1;
    for (std::size_t i = 0; i < p.sigma_gamma_init.size(); ++i) {
        j["sigma_gamma" + std::to_string(i + 1)] = p.sigma_gamma_init[i];
    }
    j["phi"] = p.phi;
    j["theta"] = p.theta;
    j["sigma_phi"] = p.sigma_phi;
    j["sigma_zeta"] = p.sigma_zeta;
    j["sigma_omega"] = p.sigma_omega;
    j["sigma_tau"] = p.sigma_tau;
    j["m"] = p.m;
    j["n"] = p.n;
    j["k"] = p.k;
    j["p"] = p.p;
    j["noise_model"] = p.noise_model == NoiseModel::ScaledAr1 ? "scaled_ar1" : "arma11";
    return j;
}

struct BenchmarkArgs {
    std::string high;
    std::string low;
    int k = 0;
    std::string method;
    double rho = 0.729;
    bool seasonal = false;
    bool no_threshold = false;
    std::string out;
    std::string report;
};

int cmd_benchmark(const BenchmarkArgs& a) {
    Method method = Method::original();
    try {
        method = parse_method(a.method);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const TimeSeries high = read_series_csv(fs::path(a.high));
    const TimeSeries low = read_series_csv(fs::path(a.low));
    const AggregationConstraint c(a.k);

    MethodOptions opts;
    opts.dagum_cholette.rho = a.rho;
    opts.seasonal = a.seasonal;
    opts.thresholding = !a.no_threshold;
    const BenchmarkResult result = run_method(method, high, low, c, opts);

    write_series_csv(fs::path(a.out), result.benchmarked);

    json report;
    report["method"] = method_id(method);
    report["label"] = method.label();
    report["k"] = a.k;
    report["n"] = high.size();
    report["m"] = low.size();
    json params;
    if (method.kind == MethodKind::DagumCholette) {
        params["rho"] = a.rho;
    }
    if (method.kind == MethodKind::Wavelet) {
        params["seasonal"] = a.seasonal;
        params["threshold"] = !a.no_threshold;
    }
    report["parameters"] = params.is_null() ? json::object() : params;
    report["max_abs_residual"] = result.max_abs_residual();
    report["constraint_residual"] = result.constraint_residual;
    const fs::path report_path = a.report.empty() ? fs::path(a.out + ".json") : fs::path(a.report);
    open_out(report_path) << report.dump(2) << '\n';
    return 0;
}

struct BasisArgs {
    int n = 0;
    int k = 0;
    std::string out;
};

int cmd_basis(const BasisArgs& a) {
    std::optional<UHBasis> basis;
    if (a.k > 0) {
        if (a.n % a.k != 0) {
            throw DimensionError("n must be a multiple of k");
        }
        basis = build_paired_bases(a.n / a.k, a.k).high;
    } else {
        basis = build_uh_basis(a.n);
    }
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!a.out.empty()) {
        file = open_out(a.out);
        out = &file;
    }
    *out << "level,index,start,breakpoint,end\n";
    for (const auto& node : basis->nodes()) {
        *out << node.level << ',' << node.index << ',' << node.start << ',' << node.breakpoint << ',' << node.end
             << '\n';
    }
    return 0;
}

struct SimulateArgs {
    std::string params;
    int reps = 1;
    std::int64_t seed = 1;
    std::string outdir;
};

std::string rep_stem(int r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "rep_%04d", r);
    return buf;
}

int cmd_simulate(const SimulateArgs& a) {
    const StudyConfig cfg = load_config(a.params);
    if (a.reps < 1) {
        throw UsageError("--reps must be >= 1");
    }
    const fs::path dir(a.outdir);
    ensure_dir(dir);

    json manifest;
    manifest["version"] = WAVEBENCH_VERSION;
    manifest["params"] = params_json(cfg.params);
    manifest["reps"] = a.reps;
    manifest["base_seed"] = a.seed;
    json reps = json::array();
    for (int r = 0; r < a.reps; ++r) {
        const std::int64_t seed = a.seed + r;
        const SimTriple sim = simulate(cfg.params, seed);
        const std::string stem = rep_stem(r + 1);

        auto high = open_out(dir / (stem + "_high.csv"));
        high << "t,true_high,obs_high\n";
        for (std::size_t t = 0; t < sim.true_high.size(); ++t) {
            high << sim.true_high.start_index() + static_cast<std::int64_t>(t) << ','
                 << format_double(sim.true_high[t]) << ',' << format_double(sim.obs_high[t]) << '\n';
        }
        write_series_csv(dir / (stem + "_low.csv"), sim.obs_low);
        write_series_csv(dir / (stem + "_obs.csv"), sim.obs_high);

        reps.push_back({{"replicate", r},
                        {"seed", seed},
                        {"high", stem + "_high.csv"},
                        {"low", stem + "_low.csv"},
                        {"obs", stem + "_obs.csv"}});
    }
    manifest["replicates"] = std::move(reps);
    open_out(dir / "manifest.json") << manifest.dump(2) << '\n';
    return 0;
}

struct EvaluateArgs {
    std::string study;
    std::string outdir;
    std::optional<int> reps;
    bool quiet = false;
};

int cmd_evaluate(const EvaluateArgs& a) {
    StudyConfig cfg = load_config(a.study);
    if (a.reps) {
        cfg.reps = *a.reps;
    }
    if (cfg.methods.empty()) {
        throw ConfigError("no methods requested");
    }
    const fs::path dir(a.outdir);
    ensure_dir(dir);

    const StudyReport report = run_study(cfg, [&](int r) {
        if (!a.quiet && ((r + 1) % 50 == 0 || r + 1 == cfg.reps)) {
            std::cerr << "replicate " << r + 1 << " / " << cfg.reps << '\n';
        }
    });

    auto summary = open_out(dir / "summary.csv");
    summary << "method,mean_mse,revision_metric\n";
    for (const auto& row : report.rows) {
        summary << row.method.label() << ',' << format_double(row.mean_mse) << ','
                << format_double(row.revision_metric) << '\n';
    }

    auto per_rep = open_out(dir / "mse_by_replicate.csv");
    per_rep << "replicate,seed";
    for (const auto& row : report.rows) {
        per_rep << ',' << method_id(row.method);
    }
    per_rep << '\n';
    for (int r = 0; r < report.reps; ++r) {
        per_rep << r << ',' << cfg.seed + r;
        for (const auto& row : report.rows) {
            per_rep << ',' << format_double(row.mses[static_cast<std::size_t>(r)]);
        }
        per_rep << '\n';
    }

    auto box = open_out(dir / "mse_boxplot.csv");
    box << "method,min,q1,median,q3,max,mean\n";
    for (const auto& row : report.rows) {
        box << row.method.label();
        for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            box << ',' << format_double(quantile(row.mses, q));
        }
        box << ',' << format_double(row.mean_mse) << '\n';
    }

    std::printf("%-20s %12s %16s\n", "method", "mean MSE", "revision metric");
    for (const auto& row : report.rows) {
        std::printf("%-20s %12.2f %16.2f\n", row.method.label().c_str(), row.mean_mse, row.revision_metric);
    }
    return 0;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark high-frequency series to low-frequency totals"};
    app.set_version_flag("--version", std::string("wavebench ") + WAVEBENCH_VERSION + " (" + WAVEBENCH_BUILD_TYPE + ")");
    app.require_subcommand(1);

    BenchmarkArgs bench;
    auto* sub_bench = app.add_subcommand("benchmark", "Benchmark one series pair");
    sub_bench->add_option("--high", bench.high, "High-frequency CSV")->required();
    sub_bench->add_option("--low", bench.low, "Low-frequency CSV")->required();
    sub_bench->add_option("--k", bench.k, "Aggregation factor")->required()->check(CLI::PositiveNumber);
    sub_bench->add_option("--method", bench.method, "denton1 | denton2 | dc | elementary | wavelet | original")
        ->required();
    sub_bench->add_option("--rho", bench.rho, "AR(1) parameter for dc")->capture_default_str();
    sub_bench->add_flag("--seasonal", bench.seasonal, "Seasonally adjust with period k before wavelet benchmarking");
    sub_bench->add_flag("--no-threshold", bench.no_threshold, "Skip wavelet thresholding");
    sub_bench->add_option("--out", bench.out, "Output CSV")->required();
    sub_bench->add_option("--report", bench.report, "Report JSON (default: <out>.json)");

    BasisArgs basis;
    auto* sub_basis = app.add_subcommand("basis", "Print an unbalanced Haar basis");
    sub_basis->add_option("--n", basis.n, "Series length")->required()->check(CLI::PositiveNumber);
    sub_basis->add_option("--k", basis.k, "Aggregation factor; prints the high member of the paired bases")
        ->check(CLI::PositiveNumber);
    sub_basis->add_option("--out", basis.out, "Output CSV (default: stdout)");

    SimulateArgs sim;
    auto* sub_sim = app.add_subcommand("simulate", "Simulate replicates of the structural model");
    sub_sim->add_option("--params", sim.params, "Parameter file")->required();
    sub_sim->add_option("--reps", sim.reps, "Replicates")->required();
    sub_sim->add_option("--seed", sim.seed, "Base seed")->required();
    sub_sim->add_option("--outdir", sim.outdir, "Output directory")->required();

    EvaluateArgs eval;
    auto* sub_eval = app.add_subcommand("evaluate", "Run a simulation study");
    sub_eval->add_option("--study", eval.study, "Study file")->required();
    sub_eval->add_option("--outdir", eval.outdir, "Output directory")->required();
    sub_eval->add_option("--reps", eval.reps, "Override the study's replicate count");
    sub_eval->add_flag("--quiet", eval.quiet, "No progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    if (sub_bench->parsed()) {
        return guarded([&] { return cmd_benchmark(bench); });
    }
    if (sub_basis->parsed()) {
        return guarded([&] { return cmd_basis(basis); });
    }
    if (sub_sim->parsed()) {
        return guarded([&] { return cmd_simulate(sim); });
    }
    return guarded([&] { return cmd_evaluate(eval); });
}
