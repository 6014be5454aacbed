#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "wavebench/study.hpp"

namespace wavebench {

/// Flat `key = value` configuration; '#' starts a comment.
///
/// Simulation keys: sigma_mu1, sigma_upsilon1, sigma_gamma1 .. sigma_gamma{k-1},
/// phi, theta, sigma_phi, sigma_zeta, sigma_omega, sigma_tau, m, n, k, p,
/// noise_model (scaled_ar1 | arma11).
/// Study keys: methods, reps, seed, rho, dc_bias, seasonal, threshold.
///
/// Unset keys keep their defaults; sigma_gamma{i} defaults to 1. Unknown or
/// repeated keys and unparsable values throw ConfigError.
StudyConfig parse_config(std::istream& in);
StudyConfig load_config(const std::filesystem::path& path);

// Simulation keys of `params` in the input format, one per line.
std::string format_params(const SimulationParams& params);

} // namespace wavebench
