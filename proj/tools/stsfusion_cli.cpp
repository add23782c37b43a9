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
// Command-line front end: configuration loading, experiment dispatch,
// seeding, and plot-data emission.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "stsfusion/report.hpp"
#include "stsfusion/stsfusion.hpp"

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           const stsfusion::LoadedConfig& loaded) {
    if (flag_seed) return *flag_seed;
    if (loaded.explicit_keys.count("seed")) return loaded.config.seed;
    if (const char* env = std::getenv("STSFUSION_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw stsfusion::ValidationError("STSFUSION_SEED", "bad integer in environment");
        }
    }
    return loaded.config.seed;  // default
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo simulator for space-time-spreading aided decision fusion"};
    app.set_version_flag("--version", stsfusion::kToolVersion);

    std::string config_path, preset, rules, output_dir = "out", format = "csv";
    std::string dispersion_in;
    std::optional<long> trials;
    std::optional<std::uint64_t> seed;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool dump_channel = false, fixed_deployment = false, save_dispersion = false;

    app.add_option("--config", config_path, "Run configuration file (flat key = value)");
    app.add_option("--preset", preset, "Experiment preset: fig3, fig4, fig5 or fig6");
    app.add_option("--rules", rules, "Comma-separated fusion rules, or 'all'");
    app.add_option("--trials", trials, "Monte-Carlo frames per hypothesis");
    app.add_option("--seed", seed, "Master seed (fallback: config file, then STSFUSION_SEED)");
    app.add_option("--output", output_dir, "Output directory")->capture_default_str();
    app.add_option("--format", format, "Curve file format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--workers", workers, "Worker threads")->capture_default_str();
    app.add_option("--dispersion-in", dispersion_in,
                   "Reuse a saved dispersion set instead of selecting one");
    app.add_flag("--save-dispersion", save_dispersion,
                 "Write the selected dispersion set(s) next to the curves");
    app.add_flag("--dump-channel", dump_channel, "Write one channel realization");
    app.add_flag("--fixed-deployment", fixed_deployment,
                 "Hold geometry and shadowing fixed across trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (config_path.empty() && preset.empty()) {
            std::cerr << "error: one of --config or --preset is required\n"
                      << app.help() << '\n';
            return 2;
        }

        stsfusion::LoadedConfig loaded;
        if (!config_path.empty()) {
            loaded = stsfusion::load_config(config_path);
            if (!preset.empty()) {
                std::cerr << "error: --preset and --config are mutually exclusive "
                             "(name the preset inside the config file instead)\n";
                return 2;
            }
        } else {
            loaded.config = stsfusion::preset_experiment(preset);
        }

        stsfusion::Config cfg = loaded.config;
        cfg.seed = resolve_seed(seed, loaded);
        if (trials) cfg.trials = *trials;
        if (!rules.empty()) cfg.rules = rules;
        if (fixed_deployment) cfg.fixed_deployment = true;
        if (workers < 1) throw stsfusion::ValidationError("workers", "must be at least 1");
        stsfusion::validate_config(cfg);

        stsfusion::RunOptions opts;
        opts.outdir = output_dir;
        opts.format = format;
        opts.workers = workers;
        opts.dump_channel = dump_channel;
        opts.dispersion_in = dispersion_in;
        opts.save_dispersion = save_dispersion;
        opts.name = cfg.preset_name.empty() ? "run" : cfg.preset_name;

        const stsfusion::RunArtifacts art = stsfusion::run_experiment(cfg, opts);
        for (const std::string& f : art.files) std::cout << "wrote " << f << '\n';
        std::cout << "done in " << art.manifest["duration_seconds"].get<double>()
                  << " s (seed " << cfg.seed << ", " << workers << " workers)\n";
        return 0;
    } catch (const stsfusion::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const stsfusion::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const stsfusion::UnknownPreset& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
