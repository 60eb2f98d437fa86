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

#include <cmath>
#include <numbers>

#include "risloc/channel.hpp"
#include "risloc/estimation.hpp"

using namespace risloc;

namespace
{

SignalGrid make_cisoid(const PilotGrid &pilots, double tau, double nu)
{
    SignalGrid y;
    y.freq_count = pilots.freq_count();
    y.time_count = pilots.time_count();
    y.role = GridRole::received;
    y.values.resize(pilots.sample_count());
    for (std::size_t i = 0; i < y.time_count; ++i)
        for (std::size_t k = 0; k < y.freq_count; ++k)
        {
            const double angle = -2.0 * std::numbers::pi *
                                 (tau * pilots.frequencies[k] - nu * pilots.times[i]);
            y.at(k, i) = {std::cos(angle), std::sin(angle)};
        }
    return y;
}

} // namespace

static void BM_DelayDopplerSearch(benchmark::State &state)
{
    const std::size_t f_count = static_cast<std::size_t>(state.range(0));
    const std::size_t t_count = static_cast<std::size_t>(state.range(1));
    const PilotGrid pilots =
        make_pilot_grid(24.5e9, 25.5e9, f_count, 0.025, t_count, 1.0);
    const double tau0 = 4.2e-8;
    const double nu0 = -310.0;
    const SignalGrid y = make_cisoid(pilots, tau0, nu0);
    const SearchWindow window = SearchWindow::spanning(
        tau0 - 6.0 / pilots.bandwidth(), tau0 + 6.0 / pilots.bandwidth(),
        nu0 - 6.0 / pilots.time_span(), nu0 + 6.0 / pilots.time_span(), pilots);

    for (auto _ : state)
    {
        AnchorObservation est = estimate_delay_doppler(y, pilots, window, 1);
        benchmark::DoNotOptimize(est.mean_delay);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(pilots.sample_count()));
}
BENCHMARK(BM_DelayDopplerSearch)->Args({51, 25})->Args({201, 100});

BENCHMARK_MAIN();
