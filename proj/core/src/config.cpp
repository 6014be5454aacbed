#include "wavebench/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wavebench/csv.hpp"
#include "wavebench/errors.hpp"

namespace wavebench {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    }
    return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
    Int out = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

NoiseModel to_noise_model(const std::string& value) {
    if (value == "scaled_ar1") {
        return NoiseModel::ScaledAr1;
    }
    if (value == "arma11") {
        return NoiseModel::Arma11;
    }
    throw ConfigError("noise_model must be scaled_ar1 or arma11, got '" + value + "'");
}

} // namespace

StudyConfig parse_config(std::istream& in) {
    StudyConfig cfg;
    auto& p = cfg.params;
    std::map<int, double> gammas;
    std::set<std::string> seen;
    bool n_set = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": '" + key + "' given twice");
        }

        if (key == "sigma_mu1") {
            p.sigma_mu1 = to_double(key, value);
        } else if (key == "sigma_upsilon1") {
            p.sigma_upsilon1 = to_double(key, value);
        } else if (key.rfind("sigma_gamma", 0) == 0 && key.size() > 11) {
            const int idx = to_int<int>(key, key.substr(11));
            if (idx < 1) {
                throw ConfigError("'" + key + "' is not a valid seasonal index");
            }
            gammas[idx] = to_double(key, value);
        } else if (key == "phi") {
            p.phi = to_double(key, value);
        } else if (key == "theta") {
            p.theta = to_double(key, value);
        } else if (key == "sigma_phi") {
            p.sigma_phi = to_double(key, value);
        } else if (key == "sigma_zeta") {
            p.sigma_zeta = to_double(key, value);
        } else if (key == "sigma_omega") {
            p.sigma_omega = to_double(key, value);
        } else if (key == "sigma_tau") {
            p.sigma_tau = to_double(key, value);
        } else if (key == "m") {
            p.m = to_int<int>(key, value);
        } else if (key == "n") {
            p.n = to_int<int>(key, value);
            n_set = true;
        } else if (key == "k") {
            p.k = to_int<int>(key, value);
        } else if (key == "p") {
            p.p = to_int<int>(key, value);
        } else if (key == "noise_model") {
            p.noise_model = to_noise_model(value);
        } else if (key == "methods") {
            cfg.methods = parse_method_list(value);
        } else if (key == "reps") {
            cfg.reps = to_int<int>(key, value);
        } else if (key == "seed") {
            cfg.seed = to_int<std::int64_t>(key, value);
        } else if (key == "rho") {
            cfg.options.dagum_cholette.rho = to_double(key, value);
        } else if (key == "dc_bias") {
            cfg.options.dagum_cholette.include_bias = to_bool(key, value);
        } else if (key == "seasonal") {
            cfg.options.seasonal = to_bool(key, value);
        } else if (key == "threshold") {
            cfg.options.thresholding = to_bool(key, value);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (!n_set) {
        p.n = p.k * p.m;
    }
    if (p.k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (!gammas.empty() && gammas.rbegin()->first > p.k - 1) {
        throw ConfigError("sigma_gamma" + std::to_string(gammas.rbegin()->first) + " exceeds k - 1 = " +
                          std::to_string(p.k - 1));
    }
    p.sigma_gamma_init.assign(static_cast<std::size_t>(p.k - 1), 1.0);
    for (const auto& [idx, v] : gammas) {
        p.sigma_gamma_init[static_cast<std::size_t>(idx - 1)] = v;
    }
    p.validate();
    return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open config file " + path.string());
    }
    return parse_config(in);
}

std::string format_params(const SimulationParams& p) {
    std::ostringstream out;
    out << "sigma_mu1 = " << format_double(p.sigma_mu1) << '\n';
    out << "sigma_upsilon1 = " << format_double(p.sigma_upsilon1) << '\n';
    for (std::size_t i = 0; i < p.sigma_gamma_init.size(); ++i) {
        out << "sigma_gamma" << i + 1 << " = " << format_double(p.sigma_gamma_init[i]) << '\n';
    }
    out << "phi = " << format_double(p.phi) << '\n';
    out << "theta = " << format_double(p.theta) << '\n';
    out << "sigma_phi = " << format_double(p.sigma_phi) << '\n';
    out << "sigma_zeta = " << format_double(p.sigma_zeta) << '\n';
    out << "sigma_omega = " << format_double(p.sigma_omega) << '\n';
    out << "sigma_tau = " << format_double(p.sigma_tau) << '\n';
    out << "m = " << p.m << '\n';
    out << "n = " << p.n << '\n';
    out << "k = " << p.k << '\n';
    out << "p = " << p.p << '\n';
    out << "noise_model = " << (p.noise_model == NoiseModel::ScaledAr1 ? "scaled_ar1" : "arma11") << '\n';
    return out.str();
}

} // namespace wavebench
