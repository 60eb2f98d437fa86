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
// Grid sweeps and Monte-Carlo campaigns over a scenario: per-cell CRB
// heatmaps, estimator-versus-bound trials, and the CSV emission both feed.
// Cells and trials are independent work units; outputs are byte-identical
// for any thread count.

#ifndef RISLOC_SWEEP_HPP
#define RISLOC_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risloc/crb.hpp"
#include "risloc/scenario.hpp"

namespace risloc
{

enum class CellStatus : std::uint8_t
{
    ok,
    singular,       // FIM singular or Doppler at the kinematic boundary
    rank_deficient, // stacked line system unsolvable for this subset
};

const char *to_string(CellStatus status);

/// Per-cell CRB over the scenario grid, stored y-major (y outer, x inner).
struct HeatmapResult
{
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> crb_y; // m^2, valid when status == ok
    std::vector<double> crb_x; // m^2
    std::vector<CellStatus> status;

    std::size_t index(std::size_t ix, std::size_t iy) const
    {
        return iy * xs.size() + ix;
    }
};

struct SweepOptions
{
    std::vector<std::size_t> ris_subset;       // empty = all (0-based)
    std::optional<ProfileMode> profile_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<GridSpec> grid_override;
    unsigned threads = 1;
};

/// CRB heatmap over the scenario grid. Profiles are drawn once per sweep
/// from the (derived) seeds and reused across cells; per-cell failures
/// degrade to status flags and never abort the sweep.
HeatmapResult sweep_crb_map(const Scenario &scenario, const SweepOptions &options);

struct MonteCarloResult
{
    Vec2 true_ue;
    std::vector<std::size_t> trial_index; // successful trials, 1-based
    std::vector<Vec2> errors;             // estimate - truth per success
    std::size_t trials = 0;
    std::size_t failures = 0;
    double rmse_x = 0.0;
    double rmse_y = 0.0;
    double sqrt_crb_x = 0.0;
    double sqrt_crb_y = 0.0;
};

struct MonteCarloOptions
{
    std::size_t trials = 100;
    std::vector<std::size_t> ris_subset; // empty = all (0-based)
    std::optional<ProfileMode> profile_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<Vec2> ue_override; // default: scenario.ue[0] or grid center
    unsigned threads = 1;
};

/// Noise-draw -> per-RIS delay/Doppler estimation -> line fix campaign at
/// one true UE position, with the matched CRB at that position. Estimator
/// failures are counted, not fatal; RMSE covers successful trials only.
MonteCarloResult run_monte_carlo(const Scenario &scenario,
                                 const MonteCarloOptions &options);

/// Header: x_m,y_m,crb_y_m2,crb_x_m2,status. One row per cell, y-major;
/// non-ok cells leave the value fields empty. Full-precision decimal floats.
void write_heatmap_csv(const HeatmapResult &result, const std::string &path);

/// Header: trial,err_x_m,err_y_m; one row per successful trial; trailing
/// '#'-prefixed summary block with RMSE and sqrt(CRB) values.
void write_mc_csv(const MonteCarloResult &result, const std::string &path);

std::string heatmap_csv_string(const HeatmapResult &result);
std::string mc_csv_string(const MonteCarloResult &result);

/// Shortest round-trip decimal form of a double (CSV/JSON stable).
std::string format_double(double value);

} // namespace risloc

#endif
