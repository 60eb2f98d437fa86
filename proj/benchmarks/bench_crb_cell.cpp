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

#include <benchmark/benchmark.h>

#include "risloc/crb.hpp"
#include "risloc/scenario.hpp"
#include "risloc/sweep.hpp"

using namespace risloc;

namespace
{

Scenario corners(int pixels, std::size_t f_count, std::size_t t_count)
{
    const double fc = 25e9;
    const double dd = constants::speed_of_light / (2.0 * fc);
    const double half = (pixels - 1) * dd / (2.0 * std::sqrt(2.0));
    Scenario s;
    const double defs[4][5] = {{10, 10, -1, 251, 251},
                               {10, -10, 1, 251, -251},
                               {-10, 10, 1, -251, 251},
                               {-10, -10, -1, -251, -251}};
    const int sides[4] = {-1, 1, -1, 1};
    for (int r = 0; r < 4; ++r)
    {
        RisSpec spec;
        spec.origin = {defs[r][0] - half,
                       defs[r][2] < 0 ? defs[r][1] + half : defs[r][1] - half};
        spec.slope = defs[r][2];
        spec.length_pixels = pixels;
        spec.pixel_spacing = dd;
        spec.side = sides[r];
        spec.bs.position = {defs[r][3], defs[r][4]};
        s.ris.push_back(spec);
    }
    s.pilots = {24.5e9, 25.5e9, f_count, 0.025, t_count, 1.0};
    s.speed_mps = 10.0;
    s.snr_db = 47.0;
    s.grid.x = {-7.25, 7.25, 1};
    s.grid.y = {-7.25, 7.25, 1};
    s.seed = 9;
    return s;
}

} // namespace

// One heatmap cell: four channel syntheses, FIMs, gradients, and the bound.
static void BM_CrbCell(benchmark::State &state)
{
    Scenario s = corners(static_cast<int>(state.range(0)), 51, 25);
    GridSpec cell;
    cell.x = {1.75, 1.75, 1};
    cell.y = {0.75, 0.75, 1};
    SweepOptions opts;
    opts.grid_override = cell;
    opts.threads = 1;

    for (auto _ : state)
    {
        HeatmapResult map = sweep_crb_map(s, opts);
        benchmark::DoNotOptimize(map.crb_y.data());
    }
}
BENCHMARK(BM_CrbCell)->Arg(25)->Arg(100);

BENCHMARK_MAIN();
