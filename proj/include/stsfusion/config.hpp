// SPDX-License-Identifier: Apache-2.0
//
// stsfusion - space-time spreading aided decision fusion for wireless sensor networks
// Copyright (C) 2026 stsfusion contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Flat key=value run configuration, experiment presets, and validation.
// Presets are named bundles; explicit keys in a config file override preset
// values key by key. See README for the documented schema.

#ifndef STSFUSION_CONFIG_HPP
#define STSFUSION_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stsfusion/errors.hpp"
#include "stsfusion/fusion.hpp"
#include "stsfusion/matrix_io.hpp"
#include "stsfusion/sensors.hpp"

namespace stsfusion {

inline constexpr const char* kToolVersion = "0.1.0";

/// Resolved (M, N, T, Q) system snapshot consumed by the simulation engine.
struct SystemConfig {
    int M = 8;      // sensors
    int N = 8;      // fusion-center receive antennas
    int T = 8;      // space-time block length, symbols
    int Q = 8;      // dispersion matrices in the set
    int L_f = 1;    // blocks per frame
    double rho = 0.0;
    double sigma_w2 = 0.0;
    double sigma_e2 = 0.0;
    bool sts_enabled = true;
};

/**
 * @brief Full run configuration: system, channel, sensors, experiment.
 *
 * rho defaults to 1/sqrt(N) and the noise variance is derived from snr_db
 * via sigma_w2 = rho / 10^(snr_db/10) unless overridden directly; only the
 * ratio rho/sigma_w2 enters any statistic.
 */
struct Config {
    // system
    int M = 8, N = 8, T = 8, Q = 8, L_f = 1;
    std::optional<double> rho_override;
    double snr_db = 15.0;
    std::optional<double> sigma_w2_override;
    double sigma_e2 = 0.0;
    bool sigma_e2_tracks_noise = false;  // "sigma_e2 = noise" in config files
    bool sts_enabled = true;

    // channel
    double eta = 2.0;
    double mu_lambda_db = 4.0;
    double sigma_lambda_db = 2.0;
    double phi_min = 100.0;
    double phi_max = 1000.0;

    // sensors (scalar entries are replicated to length M)
    std::vector<double> sensor_pd{0.5};
    std::vector<double> sensor_pf{0.05};
    bool allow_uninformative = false;

    // experiment
    std::string experiment = "roc";  // roc | detection
    long trials = 10000;             // Monte-Carlo frames per hypothesis
    std::uint64_t seed = 1;
    std::string rules = "all";
    int n_thresholds = 200;
    double target_pf0 = 0.01;
    std::string sweep = "none";  // none | N | snr_db
    std::vector<double> sweep_values;
    std::vector<int> m_variants;  // empty = just M
    bool baseline_companion = false;
    bool fixed_deployment = false;
    int dispersion_candidates = 10;
    long pilot_trials = 2000;
    int exhaustive_limit = 12;
    std::string preset_name;  // informational echo

    bool operator==(const Config&) const = default;

    double rho() const { return rho_override ? *rho_override : 1.0 / std::sqrt(N); }
    double sigma_w2() const {
        return sigma_w2_override ? *sigma_w2_override
                                 : rho() / std::pow(10.0, snr_db / 10.0);
    }
    double sigma_e2_effective() const {
        return sigma_e2_tracks_noise ? sigma_w2() : sigma_e2;
    }

    SystemConfig system() const {
        return {M, N, T, Q, L_f, rho(), sigma_w2(), sigma_e2_effective(), sts_enabled};
    }

    SensorProfile profile() const {
        const auto expand = [this](const std::vector<double>& v) {
            Eigen::VectorXd out(M);
            for (int i = 0; i < M; ++i) out[i] = v.size() == 1 ? v[0] : v[i];
            return out;
        };
        return {expand(sensor_pd), expand(sensor_pf)};
    }

    RuleMask rule_mask() const { return parse_rules(rules); }
};

// ---- validation ----------------------------------------------------------

inline void validate_config(const Config& c) {
    const auto positive_int = [](const char* key, int v) {
        if (v < 1) throw ValidationError(key, "must be a positive integer");
    };
    positive_int("M", c.M);
    positive_int("N", c.N);
    positive_int("T", c.T);
    positive_int("Q", c.Q);
    positive_int("L_f", c.L_f);
    if (!(c.rho() > 0.0)) throw ValidationError("rho", "must be positive");
    if (!(c.sigma_w2() > 0.0)) throw ValidationError("sigma_w2", "must be positive");
    if (c.sigma_e2 < 0.0) throw ValidationError("sigma_e2", "must be nonnegative");
    if (!(c.phi_min > 0.0)) throw ValidationError("phi_min", "must be positive");
    if (c.phi_max < c.phi_min) throw ValidationError("phi_max", "must be >= phi_min");
    if (c.sigma_lambda_db < 0.0)
        throw ValidationError("sigma_lambda_db", "must be nonnegative");

    const auto check_probs = [&](const char* key, const std::vector<double>& v) {
        if (v.size() != 1 && v.size() != static_cast<std::size_t>(c.M))
            throw ValidationError(key, "list must have length 1 or M");
        for (double p : v)
            if (p < 0.0 || p > 1.0) throw ValidationError(key, "entries must be in [0, 1]");
    };
    check_probs("sensor_pd", c.sensor_pd);
    check_probs("sensor_pf", c.sensor_pf);
    if (!c.allow_uninformative) {
        const SensorProfile prof = c.profile();
        for (int m = 0; m < c.M; ++m)
            if (prof.pf[m] > prof.pd[m])
                throw ValidationError("sensor_pf",
                                      "P_F > P_D (set allow_uninformative = true to permit)");
    }
    if (c.trials < 1) throw ValidationError("trials", "must be at least 1");
    if (c.pilot_trials < 1) throw ValidationError("pilot_trials", "must be at least 1");
    if (c.dispersion_candidates < 1)
        throw ValidationError("dispersion_candidates", "must be at least 1");
    if (c.n_thresholds < 2) throw ValidationError("n_thresholds", "must be at least 2");
    if (!(c.target_pf0 > 0.0 && c.target_pf0 < 1.0))
        throw ValidationError("target_pf0", "must lie in (0, 1)");
    if (c.exhaustive_limit < 1 || c.exhaustive_limit > 26)
        throw ValidationError("exhaustive_limit", "must lie in [1, 26]");
    const RuleMask exhaustive = rule_bit(Rule::optimum) | rule_bit(Rule::max_log) |
                                rule_bit(Rule::cv_ml);
    if ((parse_rules(c.rules) & exhaustive) && c.M > c.exhaustive_limit)
        throw ValidationError("exhaustive_limit",
                              "2^M enumeration rules requested with M > limit");
    if (c.experiment != "roc" && c.experiment != "detection")
        throw ValidationError("experiment", "must be 'roc' or 'detection'");
    if (c.sweep != "none" && c.sweep != "N" && c.sweep != "snr_db")
        throw ValidationError("sweep", "must be 'none', 'N' or 'snr_db'");
    if (c.sweep != "none" && c.sweep_values.empty())
        throw ValidationError("sweep_values", "required when sweep is set");
    for (int v : c.m_variants)
        if (v < 1) throw ValidationError("m_variants", "entries must be positive");
}

// ---- presets ---------------------------------------------------------------

/// Named experiment bundles reproducing the four reported set-ups.
inline Config preset_experiment(const std::string& name) {
    Config c;
    c.preset_name = name;
    if (name == "fig3") {
        c.M = c.N = c.T = c.Q = 8;
        c.snr_db = 15.0;
        c.experiment = "roc";
        c.baseline_companion = true;
    } else if (name == "fig4") {
        c.M = 10;
        c.N = 100;
        c.T = 10;
        c.Q = 10;
        c.snr_db = 15.0;
        c.experiment = "roc";
        c.baseline_companion = true;
    } else if (name == "fig5") {
        c.M = 8;
        c.T = c.Q = 8;
        c.snr_db = 15.0;
        c.experiment = "detection";
        c.sweep = "N";
        c.sweep_values = {8, 16, 32, 64, 100};
        c.m_variants = {4, 8};
        c.target_pf0 = 0.01;
        // trend curves are conditioned on one network realization
        c.fixed_deployment = true;
    } else if (name == "fig6") {
        c.M = 8;
        c.N = 32;
        c.T = c.Q = 8;
        c.eta = 5.0;
        c.mu_lambda_db = 4.0;
        c.experiment = "detection";
        c.sweep = "snr_db";
        c.sweep_values = {0, 5, 10, 15, 20};
        // CSI estimation error rides inside the swept noise level here; an
        // explicit estimate corruption stays available via sigma_e2.
        c.sigma_e2 = 0.0;
        c.target_pf0 = 0.01;
        c.fixed_deployment = true;
    } else {
        throw UnknownPreset("unknown preset '" + name + "'");
    }
    return c;
}

// ---- flat text serialization ----------------------------------------------

namespace detail {

inline std::string join_doubles(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << format_double(v[i]);
    }
    return os.str();
}

inline std::string join_ints(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

inline std::vector<double> split_doubles(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
                ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ValidationError(key, "bad number '" + tok + "'");
        }
    }
    if (out.empty()) throw ValidationError(key, "empty list");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError(key, "expected true/false");
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Serializes every key explicitly so that load(write(c)) == c.
inline std::string write_config(const Config& c) {
    std::ostringstream os;
    os << "# stsfusion run configuration\n";
    if (!c.preset_name.empty()) os << "preset = " << c.preset_name << '\n';
    os << "M = " << c.M << '\n';
    os << "N = " << c.N << '\n';
    os << "T = " << c.T << '\n';
    os << "Q = " << c.Q << '\n';
    os << "L_f = " << c.L_f << '\n';
    if (c.rho_override) os << "rho = " << format_double(*c.rho_override) << '\n';
    os << "snr_db = " << format_double(c.snr_db) << '\n';
    if (c.sigma_w2_override)
        os << "sigma_w2 = " << format_double(*c.sigma_w2_override) << '\n';
    os << "sigma_e2 = "
       << (c.sigma_e2_tracks_noise ? std::string("noise") : format_double(c.sigma_e2))
       << '\n';
    os << "sts_enabled = " << (c.sts_enabled ? "true" : "false") << '\n';
    os << "eta = " << format_double(c.eta) << '\n';
    os << "mu_lambda_db = " << format_double(c.mu_lambda_db) << '\n';
    os << "sigma_lambda_db = " << format_double(c.sigma_lambda_db) << '\n';
    os << "phi_min = " << format_double(c.phi_min) << '\n';
    os << "phi_max = " << format_double(c.phi_max) << '\n';
    os << "sensor_pd = " << detail::join_doubles(c.sensor_pd) << '\n';
    os << "sensor_pf = " << detail::join_doubles(c.sensor_pf) << '\n';
    os << "allow_uninformative = " << (c.allow_uninformative ? "true" : "false") << '\n';
    os << "experiment = " << c.experiment << '\n';
    os << "trials = " << c.trials << '\n';
    os << "seed = " << c.seed << '\n';
    os << "rules = " << c.rules << '\n';
    os << "n_thresholds = " << c.n_thresholds << '\n';
    os << "target_pf0 = " << format_double(c.target_pf0) << '\n';
    os << "sweep = " << c.sweep << '\n';
    if (!c.sweep_values.empty())
        os << "sweep_values = " << detail::join_doubles(c.sweep_values) << '\n';
    if (!c.m_variants.empty())
        os << "m_variants = " << detail::join_ints(c.m_variants) << '\n';
    os << "baseline_companion = " << (c.baseline_companion ? "true" : "false") << '\n';
    os << "fixed_deployment = " << (c.fixed_deployment ? "true" : "false") << '\n';
    os << "dispersion_candidates = " << c.dispersion_candidates << '\n';
    os << "pilot_trials = " << c.pilot_trials << '\n';
    os << "exhaustive_limit = " << c.exhaustive_limit << '\n';
    return os.str();
}

/// Parsed config plus the set of keys the file actually named (the CLI uses
/// this for seed-precedence decisions).
struct LoadedConfig {
    Config config;
    std::set<std::string> explicit_keys;
};

inline LoadedConfig load_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = value;
    }

    Config c;
    if (auto it = kv.find("preset"); it != kv.end()) {
        c = preset_experiment(it->second);
        kv.erase(it);
    }

    LoadedConfig loaded;
    const auto to_int = [](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const long n = std::stol(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return n;
        } catch (const std::exception&) {
            throw ValidationError(key, "bad integer '" + v + "'");
        }
    };
    const auto to_double = [](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ValidationError(key, "bad number '" + v + "'");
        }
    };

    for (const auto& [key, value] : kv) {
        loaded.explicit_keys.insert(key);
        if (key == "M") c.M = static_cast<int>(to_int(key, value));
        else if (key == "N") c.N = static_cast<int>(to_int(key, value));
        else if (key == "T") c.T = static_cast<int>(to_int(key, value));
        else if (key == "Q") c.Q = static_cast<int>(to_int(key, value));
        else if (key == "L_f") c.L_f = static_cast<int>(to_int(key, value));
        else if (key == "rho") c.rho_override = to_double(key, value);
        else if (key == "snr_db") c.snr_db = to_double(key, value);
        else if (key == "sigma_w2") c.sigma_w2_override = to_double(key, value);
        else if (key == "sigma_e2") {
            if (value == "noise") {
                c.sigma_e2_tracks_noise = true;
                c.sigma_e2 = 0.0;
            } else {
                c.sigma_e2_tracks_noise = false;
                c.sigma_e2 = to_double(key, value);
            }
        } else if (key == "sts_enabled") c.sts_enabled = detail::parse_bool(key, value);
        else if (key == "eta") c.eta = to_double(key, value);
        else if (key == "mu_lambda_db") c.mu_lambda_db = to_double(key, value);
        else if (key == "sigma_lambda_db") c.sigma_lambda_db = to_double(key, value);
        else if (key == "phi_min") c.phi_min = to_double(key, value);
        else if (key == "phi_max") c.phi_max = to_double(key, value);
        else if (key == "sensor_pd") c.sensor_pd = detail::split_doubles(key, value);
        else if (key == "sensor_pf") c.sensor_pf = detail::split_doubles(key, value);
        else if (key == "allow_uninformative")
            c.allow_uninformative = detail::parse_bool(key, value);
        else if (key == "experiment") c.experiment = value;
        else if (key == "trials") c.trials = to_int(key, value);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
        else if (key == "rules") c.rules = value;
        else if (key == "n_thresholds") c.n_thresholds = static_cast<int>(to_int(key, value));
        else if (key == "target_pf0") c.target_pf0 = to_double(key, value);
        else if (key == "sweep") c.sweep = value;
        else if (key == "sweep_values") c.sweep_values = detail::split_doubles(key, value);
        else if (key == "m_variants") {
            c.m_variants.clear();
            for (double v : detail::split_doubles(key, value))
                c.m_variants.push_back(static_cast<int>(v));
        } else if (key == "baseline_companion")
            c.baseline_companion = detail::parse_bool(key, value);
        else if (key == "fixed_deployment")
            c.fixed_deployment = detail::parse_bool(key, value);
        else if (key == "dispersion_candidates")
            c.dispersion_candidates = static_cast<int>(to_int(key, value));
        else if (key == "pilot_trials") c.pilot_trials = to_int(key, value);
        else if (key == "exhaustive_limit")
            c.exhaustive_limit = static_cast<int>(to_int(key, value));
        else
            throw ValidationError(key, "unknown key");
    }

    validate_config(c);
    loaded.config = c;
    return loaded;
}

inline LoadedConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return load_config_text(buf.str());
}

}  // namespace stsfusion

#endif  // STSFUSION_CONFIG_HPP
