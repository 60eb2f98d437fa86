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

#include "risloc/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "risloc/errors.hpp"
#include "risloc/estimation.hpp"
#include "risloc/parallel.hpp"
#include "risloc/rng.hpp"

namespace risloc
{

const char *to_string(CellStatus status)
{
    switch (status)
    {
    case CellStatus::ok:
        return "ok";
    case CellStatus::singular:
        return "singular";
    case CellStatus::rank_deficient:
        return "rank-deficient";
    }
    return "unknown";
}

std::string format_double(double value)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace
{

/// Everything about one active RIS that is reusable across cells/trials.
struct ActiveRis
{
    RisSegment segment;
    BsLink link;
    RisProfile profile;
};

std::vector<std::size_t> resolve_subset(const Scenario &scenario,
                                        const std::vector<std::size_t> &subset)
{
    if (subset.empty())
    {
        std::vector<std::size_t> all(scenario.ris.size());
        for (std::size_t r = 0; r < all.size(); ++r)
            all[r] = r;
        return all;
    }
    for (std::size_t r : subset)
        if (r >= scenario.ris.size())
            throw ValidationError("RIS subset index " + std::to_string(r + 1) +
                                  " exceeds the scenario RIS count");
    return subset;
}

std::vector<ActiveRis> materialize(const Scenario &scenario,
                                   const std::vector<std::size_t> &subset,
                                   std::optional<ProfileMode> profile_override,
                                   std::uint64_t master_seed)
{
    std::vector<ActiveRis> out;
    out.reserve(subset.size());
    for (std::size_t r : subset)
    {
        ActiveRis a;
        a.segment = scenario.segment(r);
        a.link = scenario.link(r);
        const ProfileMode mode = profile_override.value_or(scenario.ris[r].profile);
        const std::uint64_t seed =
            scenario.ris[r].seed ? *scenario.ris[r].seed : derive_seed(master_seed, 1, r);
        a.profile = make_profile(mode, a.segment.pixel_count, seed);
        out.push_back(std::move(a));
    }
    return out;
}

struct CellBound
{
    double crb_y = 0.0;
    double crb_x = 0.0;
    CellStatus status = CellStatus::ok;
};

/// Full chain at one UE position: channel synthesis -> FIM -> intercept
/// gradient -> per-anchor variance -> closed-form position bound.
CellBound bound_at(const std::vector<ActiveRis> &active, Vec2 ue,
                   const PilotGrid &pilots, const WeightVectors &weights,
                   const MotionModel &motion, double carrier_hz)
{
    CellBound cell;
    std::vector<double> slopes;
    std::vector<double> variances;
    slopes.reserve(active.size());
    variances.reserve(active.size());
    try
    {
        for (const ActiveRis &a : active)
        {
            const PathParams params = path_params(a.segment, ue, motion, carrier_hz);
            const AnchorObservation obs = anchor_params(params);
            const AssembledChannel ch =
                assemble_channel(a.segment, a.profile, a.link, params, pilots);
            const GainVector g = gain_vector(apply_pilots(ch.channel, pilots));
            const FisherInfo J = fim(g, weights);
            const Mat2Sym j_inv = fim_inverse(J, g, weights);
            const InterceptGradient grad = b_gradient(a.segment, obs, motion, carrier_hz);
            const double variance = anchor_variance(grad, j_inv);
            if (!std::isfinite(variance) || variance < 0.0)
                throw SingularInformationError("non-finite anchor variance");
            variances.push_back(variance);
            slopes.push_back(a.segment.slope);
        }
        const ClosedFormDiagonals diag = closed_form_diagonals(slopes, variances);
        if (!std::isfinite(diag.yy) || !std::isfinite(diag.xx))
            throw SingularInformationError("non-finite position bound");
        cell.crb_y = diag.yy;
        cell.crb_x = diag.xx;
    }
    catch (const RankDeficiencyError &)
    {
        cell.status = CellStatus::rank_deficient;
    }
    catch (const SingularInformationError &)
    {
        cell.status = CellStatus::singular;
    }
    catch (const OutOfDomainError &)
    {
        cell.status = CellStatus::singular;
    }
    catch (const DegenerateGeometryError &)
    {
        cell.status = CellStatus::singular;
    }
    return cell;
}

} // namespace

HeatmapResult sweep_crb_map(const Scenario &scenario, const SweepOptions &options)
{
    scenario.validate(false);
    const std::vector<std::size_t> subset = resolve_subset(scenario, options.ris_subset);
    if (subset.size() < 2)
        throw ValidationError("sweep_crb_map: positioning requires at least two RISs");

    const std::uint64_t master = options.seed_override.value_or(scenario.seed);
    const std::vector<ActiveRis> active =
        materialize(scenario, subset, options.profile_override, master);
    const PilotGrid pilots = scenario.pilot_grid();
    const WeightVectors weights = weight_vectors(pilots, scenario.noise_variance());
    const MotionModel motion = scenario.motion();
    const double carrier = scenario.carrier_hz();

    const GridSpec grid = options.grid_override.value_or(scenario.grid);
    HeatmapResult result;
    result.xs = grid.x.samples();
    result.ys = grid.y.samples();
    const std::size_t cells = result.xs.size() * result.ys.size();
    result.crb_y.assign(cells, 0.0);
    result.crb_x.assign(cells, 0.0);
    result.status.assign(cells, CellStatus::ok);

    parallel_for(cells, options.threads, [&](std::size_t idx) {
        const std::size_t ix = idx % result.xs.size();
        const std::size_t iy = idx / result.xs.size();
        const Vec2 ue{result.xs[ix], result.ys[iy]};
        const CellBound cell = bound_at(active, ue, pilots, weights, motion, carrier);
        result.crb_y[idx] = cell.crb_y;
        result.crb_x[idx] = cell.crb_x;
        result.status[idx] = cell.status;
    });
    return result;
}

MonteCarloResult run_monte_carlo(const Scenario &scenario,
                                 const MonteCarloOptions &options)
{
    scenario.validate(false);
    if (options.trials < 1)
        throw ValidationError("run_monte_carlo: trials must be >= 1");
    const std::vector<std::size_t> subset = resolve_subset(scenario, options.ris_subset);
    if (subset.size() < 2)
        throw ValidationError("run_monte_carlo: positioning requires at least two RISs");
    {
        bool distinct = false;
        for (std::size_t r : subset)
            if (std::abs(scenario.ris[r].slope - scenario.ris[subset[0]].slope) > 1e-9)
                distinct = true;
        if (!distinct)
            throw ValidationError("run_monte_carlo: RIS subset is all-parallel");
    }

    const std::uint64_t master = options.seed_override.value_or(scenario.seed);
    const std::vector<ActiveRis> active =
        materialize(scenario, subset, options.profile_override, master);
    const PilotGrid pilots = scenario.pilot_grid();
    const MotionModel motion = scenario.motion();
    const double carrier = scenario.carrier_hz();
    const double sigma2 = scenario.noise_variance();

    Vec2 ue;
    if (options.ue_override)
        ue = *options.ue_override;
    else if (!scenario.ue.empty())
        ue = scenario.ue.front();
    else
        ue = {0.5 * (scenario.grid.x.min + scenario.grid.x.max),
              0.5 * (scenario.grid.y.min + scenario.grid.y.max)};

    // Noise-free signals, true anchor means, and truth-centered search
    // windows (desk-scale pilot grids alias beyond 1/df and 1/dt, so the
    // windows stay local; the harness synthesized the truth).
    struct PreparedRis
    {
        SignalGrid signal; // H .* X, noise-free
        double bs_delay = 0.0;
        SearchWindow window;
        const ActiveRis *ris = nullptr;
    };
    std::vector<PreparedRis> prepared;
    prepared.reserve(active.size());
    const double kinematic = motion.speed * carrier / constants::speed_of_light;
    for (const ActiveRis &a : active)
    {
        const PathParams params = path_params(a.segment, ue, motion, carrier);
        const AnchorObservation obs = anchor_params(params);
        const AssembledChannel ch =
            assemble_channel(a.segment, a.profile, a.link, params, pilots);
        PreparedRis p;
        p.signal = apply_pilots(ch.channel, pilots);
        p.bs_delay = a.link.first_pixel_delay;
        const double total_delay = obs.mean_delay + a.link.first_pixel_delay;
        const double half_t = 6.0 / pilots.bandwidth();
        const double half_n = 6.0 / pilots.time_span();
        p.window = SearchWindow::spanning(
            total_delay - half_t, total_delay + half_t,
            std::max(obs.mean_doppler - half_n, -kinematic),
            std::min(obs.mean_doppler + half_n, kinematic), pilots);
        p.ris = &a;
        prepared.push_back(std::move(p));
    }

    MonteCarloResult result;
    result.true_ue = ue;
    result.trials = options.trials;

    if (sigma2 > 0.0) // the bound is undefined at zero noise, reported as 0
    {
        const WeightVectors weights = weight_vectors(pilots, sigma2);
        const CellBound cell = bound_at(active, ue, pilots, weights, motion, carrier);
        if (cell.status != CellStatus::ok)
            throw SingularInformationError(
                "run_monte_carlo: CRB is singular at the true UE position");
        result.sqrt_crb_x = std::sqrt(cell.crb_x);
        result.sqrt_crb_y = std::sqrt(cell.crb_y);
    }

    std::vector<std::optional<Vec2>> trial_errors(options.trials);
    parallel_for(options.trials, options.threads, [&](std::size_t trial) {
        try
        {
            std::vector<PositionLine> lines;
            lines.reserve(prepared.size());
            for (std::size_t r = 0; r < prepared.size(); ++r)
            {
                const PreparedRis &p = prepared[r];
                NoiseModel noise;
                noise.variance = sigma2;
                noise.seed = derive_seed(master, 2, (trial << 16) + r);
                const SignalGrid received = add_noise(p.signal, noise);
                AnchorObservation est =
                    estimate_delay_doppler(received, pilots, p.window, 1);
                est.mean_delay -= p.bs_delay;
                const PolarObservation polar =
                    polar_from_params(est, motion, carrier);
                lines.push_back(position_line(p.ris->segment, polar));
            }
            LinearFix fix = build_system(lines);
            const Vec2 estimate = ls_solve(fix);
            trial_errors[trial] = estimate - ue;
        }
        catch (const Error &)
        {
            trial_errors[trial] = std::nullopt; // counted as a failure
        }
    });

    double ssx = 0.0, ssy = 0.0;
    for (std::size_t trial = 0; trial < options.trials; ++trial)
    {
        if (!trial_errors[trial])
        {
            ++result.failures;
            continue;
        }
        const Vec2 e = *trial_errors[trial];
        result.trial_index.push_back(trial + 1);
        result.errors.push_back(e);
        ssx += e.x * e.x;
        ssy += e.y * e.y;
    }
    const std::size_t ok = result.errors.size();
    if (ok > 0)
    {
        result.rmse_x = std::sqrt(ssx / static_cast<double>(ok));
        result.rmse_y = std::sqrt(ssy / static_cast<double>(ok));
    }
    return result;
}

std::string heatmap_csv_string(const HeatmapResult &result)
{
    std::string out = "x_m,y_m,crb_y_m2,crb_x_m2,status\n";
    for (std::size_t iy = 0; iy < result.ys.size(); ++iy)
    {
        for (std::size_t ix = 0; ix < result.xs.size(); ++ix)
        {
            const std::size_t idx = result.index(ix, iy);
            out += format_double(result.xs[ix]);
            out += ',';
            out += format_double(result.ys[iy]);
            out += ',';
            if (result.status[idx] == CellStatus::ok)
            {
                out += format_double(result.crb_y[idx]);
                out += ',';
                out += format_double(result.crb_x[idx]);
            }
            else
            {
                out += ',';
            }
            out += ',';
            out += to_string(result.status[idx]);
            out += '\n';
        }
    }
    return out;
}

std::string mc_csv_string(const MonteCarloResult &result)
{
    std::string out = "trial,err_x_m,err_y_m\n";
    for (std::size_t i = 0; i < result.errors.size(); ++i)
    {
        out += std::to_string(result.trial_index[i]);
        out += ',';
        out += format_double(result.errors[i].x);
        out += ',';
        out += format_double(result.errors[i].y);
        out += '\n';
    }
    out += "# trials," + std::to_string(result.trials) + "\n";
    out += "# failures," + std::to_string(result.failures) + "\n";
    out += "# ue_x_m," + format_double(result.true_ue.x) + "\n";
    out += "# ue_y_m," + format_double(result.true_ue.y) + "\n";
    out += "# rmse_x_m," + format_double(result.rmse_x) + "\n";
    out += "# rmse_y_m," + format_double(result.rmse_y) + "\n";
    out += "# sqrt_crb_x_m," + format_double(result.sqrt_crb_x) + "\n";
    out += "# sqrt_crb_y_m," + format_double(result.sqrt_crb_y) + "\n";
    return out;
}

namespace
{

void write_text(const std::string &text, const std::string &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open output file for writing: " + path);
    out << text;
    if (!out)
        throw IoError("error while writing output file: " + path);
}

} // namespace

void write_heatmap_csv(const HeatmapResult &result, const std::string &path)
{
    write_text(heatmap_csv_string(result), path);
}

void write_mc_csv(const MonteCarloResult &result, const std::string &path)
{
    write_text(mc_csv_string(result), path);
}

} // namespace risloc
