#include "wavebench/study.hpp"

#include <string>

#include "wavebench/errors.hpp"
#include "wavebench/metrics.hpp"

namespace wavebench {

StudyReport run_study(const StudyConfig& cfg, const std::function<void(int)>& on_replicate) {
    cfg.params.validate();
    if (cfg.methods.empty()) {
        throw ConfigError("a study needs at least one method");
    }
    if (cfg.reps < 1) {
        throw ConfigError("a study needs reps >= 1");
    }
    const bool revisions = cfg.revisions && cfg.params.p > 0;
    const int k = cfg.params.k;
    const AggregationConstraint c(k);

    StudyReport report;
    report.reps = cfg.reps;
    for (const auto& m : cfg.methods) {
        report.rows.push_back({m, 0.0, 0.0, {}, {}});
    }

    for (int r = 0; r < cfg.reps; ++r) {
        const SimTriple sim = simulate(cfg.params, cfg.seed + r, revisions ? cfg.params.p : 0);
        const auto n = static_cast<std::size_t>(cfg.params.n);
        const TimeSeries truth = sim.true_high.head(n);
        const TimeSeries high = sim.obs_high.head(n);
        const TimeSeries low = sim.obs_low.head(static_cast<std::size_t>(cfg.params.m));

        for (auto& row : report.rows) {
            const BenchmarkResult base = run_method(row.method, high, low, c, cfg.options);
            row.mses.push_back(mse(base.benchmarked, truth));
            if (!revisions) {
                continue;
            }
            std::vector<BenchmarkResult> ext;
            for (int e = 1; e <= cfg.params.p; ++e) {
                const auto blocks = static_cast<std::size_t>(cfg.params.m + e);
                ext.push_back(run_method(row.method, sim.obs_high.head(blocks * static_cast<std::size_t>(k)),
                                         sim.obs_low.head(blocks), c, cfg.options));
            }
            row.revisions.push_back(revision_metric(base, ext, k));
        }
        if (on_replicate) {
            on_replicate(r);
        }
    }

    for (auto& row : report.rows) {
        double total = 0.0;
        for (double v : row.mses) {
            total += v;
        }
        row.mean_mse = total / static_cast<double>(row.mses.size());
        if (!row.revisions.empty()) {
            total = 0.0;
            for (double v : row.revisions) {
                total += v;
            }
            row.revision_metric = total / static_cast<double>(row.revisions.size());
        }
    }
    return report;
}

} // namespace wavebench
