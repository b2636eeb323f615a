// Copyright 2026 The permzne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "permzne/experiment.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Permutation-driven zero-noise extrapolation for VQE"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned jobs = 1;
    bool svg = false;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output_dir in config)");
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--svg", svg, "also render an SVG scatter plot where applicable");
    };
    auto *vqe = app.add_subcommand("vqe", "noiseless VQE (depth scan when depth is auto)");
    auto *zne = app.add_subcommand("zne", "zero-noise extrapolation over qubit mappings");
    auto *sweep = app.add_subcommand("sweep", "extrapolation error against noise magnitude");
    auto *scaling = app.add_subcommand("scaling", "error distributions across n and pool sizes");
    for (auto *sub : {vqe, zne, sweep, scaling}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        const auto config = permzne::parse_config(nlohmann::json::parse(in));
        permzne::RunContext ctx;
        ctx.out_dir = out_dir.empty() ? config.output_dir : out_dir;
        ctx.jobs = jobs;
        ctx.svg = svg;
        if (*vqe) return permzne::cmd_vqe(config, ctx);
        if (*zne) return permzne::cmd_zne(config, ctx);
        if (*sweep) return permzne::cmd_sweep(config, ctx);
        if (*scaling) return permzne::cmd_scaling(config, ctx);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
