// SPDX-License-Identifier: Apache-2.0
//
// risloc: positioning with large reconfigurable intelligent surfaces as anchors
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
// Command-line front end: CRB heatmap sweeps, Monte-Carlo estimator
// campaigns, and a noise-free anchor-line demo. Exit codes: 0 success,
// 1 validation error, 2 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risloc/errors.hpp"
#include "risloc/estimation.hpp"
#include "risloc/parallel.hpp"
#include "risloc/scenario.hpp"
#include "risloc/sweep.hpp"

namespace
{

struct CommonArgs
{
    std::string scenario_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string ris_list;
    std::string profile;
    std::string grid;
    unsigned threads = risloc::default_threads();
};

std::vector<std::size_t> parse_ris_list(const std::string &text)
{
    std::vector<std::size_t> out;
    if (text.empty())
        return out;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos)
            next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        try
        {
            const long v = std::stol(tok);
            if (v < 1)
                throw std::out_of_range("non-positive");
            out.push_back(static_cast<std::size_t>(v - 1)); // 1-based flag
        }
        catch (const std::exception &)
        {
            throw risloc::ValidationError("--ris: bad index '" + tok +
                                          "' (expected 1-based integers)");
        }
        pos = next + 1;
    }
    return out;
}

std::optional<risloc::ProfileMode> parse_profile_flag(const std::string &text)
{
    if (text.empty())
        return std::nullopt;
    if (text == "mirror")
        return risloc::ProfileMode::mirror;
    if (text == "random")
        return risloc::ProfileMode::random;
    throw risloc::ValidationError("--profile must be 'mirror' or 'random'");
}

std::optional<risloc::GridSpec> parse_grid_flag(const std::string &text,
                                                const risloc::GridSpec &base)
{
    if (text.empty())
        return std::nullopt;
    const std::size_t x = text.find('x');
    if (x == std::string::npos)
        throw risloc::ValidationError("--grid expects <nx>x<ny>, e.g. 10x10");
    try
    {
        risloc::GridSpec grid = base;
        grid.x.count = static_cast<std::size_t>(std::stoul(text.substr(0, x)));
        grid.y.count = static_cast<std::size_t>(std::stoul(text.substr(x + 1)));
        if (grid.x.count < 1 || grid.y.count < 1)
            throw std::out_of_range("zero");
        return grid;
    }
    catch (const std::exception &)
    {
        throw risloc::ValidationError("--grid expects <nx>x<ny>, e.g. 10x10");
    }
}

int run_crb_map(const CommonArgs &args)
{
    risloc::Scenario scenario = risloc::load_scenario(args.scenario_path);
    risloc::SweepOptions options;
    options.ris_subset = parse_ris_list(args.ris_list);
    options.profile_override = parse_profile_flag(args.profile);
    options.seed_override = args.seed;
    options.grid_override = parse_grid_flag(args.grid, scenario.grid);
    options.threads = args.threads;
    const risloc::HeatmapResult result = risloc::sweep_crb_map(scenario, options);
    risloc::write_heatmap_csv(result, args.out_path);
    return 0;
}

int run_monte_carlo(const CommonArgs &args, std::size_t trials)
{
    risloc::Scenario scenario = risloc::load_scenario(args.scenario_path);
    risloc::MonteCarloOptions options;
    options.trials = trials;
    options.ris_subset = parse_ris_list(args.ris_list);
    options.profile_override = parse_profile_flag(args.profile);
    options.seed_override = args.seed;
    options.threads = args.threads;
    const risloc::MonteCarloResult result = risloc::run_monte_carlo(scenario, options);
    risloc::write_mc_csv(result, args.out_path);
    return 0;
}

int run_demo_lines(const CommonArgs &args)
{
    using namespace risloc;
    Scenario scenario = load_scenario(args.scenario_path);
    scenario.validate(true);
    const std::vector<std::size_t> subset = [&] {
        std::vector<std::size_t> s = parse_ris_list(args.ris_list);
        if (s.empty())
            for (std::size_t r = 0; r < scenario.ris.size(); ++r)
                s.push_back(r);
        return s;
    }();

    Vec2 ue;
    if (!scenario.ue.empty())
        ue = scenario.ue.front();
    else
        ue = {0.5 * (scenario.grid.x.min + scenario.grid.x.max),
              0.5 * (scenario.grid.y.min + scenario.grid.y.max)};

    const MotionModel motion = scenario.motion();
    const double carrier = scenario.carrier_hz();

    std::string out = "ris,d_m,psi_rad,slope,intercept_m,x_valid_min_m,x_valid_max_m\n";
    std::vector<PositionLine> lines;
    for (std::size_t r : subset)
    {
        const RisSegment segment = scenario.segment(r);
        const AnchorObservation obs =
            anchor_params(path_params(segment, ue, motion, carrier));
        const PolarObservation polar = polar_from_params(obs, motion, carrier);
        const PositionLine line = position_line(segment, polar);
        lines.push_back(line);
        out += std::to_string(r + 1) + ',' + format_double(polar.distance) + ',' +
               format_double(polar.angle) + ',' + format_double(line.slope) + ',' +
               format_double(line.intercept) + ',' +
               format_double(line.x_validity.lo) + ',' +
               format_double(line.x_validity.hi) + '\n';
    }
    LinearFix fix = build_system(lines);
    const Vec2 estimate = ls_solve(fix);
    out += "# ue_true_x_m," + format_double(ue.x) + "\n";
    out += "# ue_true_y_m," + format_double(ue.y) + "\n";
    out += "# fix_x_m," + format_double(estimate.x) + "\n";
    out += "# fix_y_m," + format_double(estimate.y) + "\n";
    out += "# residual_norm_m," + format_double(fix.residual_norm) + "\n";
    out += "# condition," + format_double(fix.condition) + "\n";

    if (args.out_path.empty())
        std::cout << out;
    else
    {
        std::ofstream file(args.out_path, std::ios::binary | std::ios::trunc);
        if (!file)
            throw IoError("cannot open output file for writing: " + args.out_path);
        file << out;
        if (!file)
            throw IoError("error while writing output file: " + args.out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"RIS-anchored near-field positioning simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::size_t trials = 100;

    auto add_common = [&](CLI::App *cmd, bool out_required) {
        cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file")
            ->required();
        auto *out = cmd->add_option("--out", args.out_path, "Output CSV path");
        if (out_required)
            out->required();
        cmd->add_option("--seed", args.seed, "Master seed override (u64)");
        cmd->add_option("--ris", args.ris_list,
                        "Comma list of 1-based RIS indices (default: all)");
        cmd->add_option("--profile", args.profile,
                        "Profile override: mirror|random");
        cmd->add_option("--threads", args.threads, "Worker thread count");
    };

    CLI::App *crb = app.add_subcommand("crb-map", "CRB heatmap over the UE grid");
    add_common(crb, true);
    crb->add_option("--grid", args.grid, "Grid size override <nx>x<ny>");

    CLI::App *mc = app.add_subcommand("monte-carlo",
                                      "Estimator-vs-bound Monte-Carlo campaign");
    add_common(mc, true);
    mc->add_option("--trials", trials, "Number of Monte-Carlo trials");

    CLI::App *demo = app.add_subcommand("demo-lines",
                                        "Noise-free anchor lines and LS fix");
    add_common(demo, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        if (crb->parsed())
            return run_crb_map(args);
        if (mc->parsed())
            return run_monte_carlo(args, trials);
        return run_demo_lines(args);
    }
    catch (const risloc::IoError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const risloc::Error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
