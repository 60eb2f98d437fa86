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

#include "risloc/channel.hpp"
#include "risloc/geometry.hpp"

using namespace risloc;

static void BM_AssembleChannel(benchmark::State &state)
{
    const int pixels = static_cast<int>(state.range(0));
    const double fc = 25e9;
    const double dd = constants::speed_of_light / (2.0 * fc);
    const RisSegment ris = make_ris_segment({9.8, 10.2}, -1.0, pixels, dd, -1);
    const MotionModel motion{10.0};
    const PathParams params = path_params(ris, {1.5, 0.5}, motion, fc);
    const BsLink link = make_bs_link(ris, {251, 251}, {1.0, 0.0});
    const RisProfile profile = make_profile(ProfileMode::random, pixels, 7);
    const PilotGrid pilots = make_pilot_grid(24.5e9, 25.5e9, 51, 0.025, 25, 1.0);

    for (auto _ : state)
    {
        AssembledChannel ch = assemble_channel(ris, profile, link, params, pilots);
        benchmark::DoNotOptimize(ch.channel.values.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(pixels) *
                            static_cast<int64_t>(pilots.sample_count()));
}
BENCHMARK(BM_AssembleChannel)->Arg(25)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
