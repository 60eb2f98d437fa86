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
// Scenario description and JSON (de)serialization. A scenario bundles the
// RIS segments with their BS feeds and profile modes, the pilot grid
// parameters, UE motion, SNR, the evaluation grid (or an explicit UE
// list), and the master seed for all derived randomness.

#ifndef RISLOC_SCENARIO_HPP
#define RISLOC_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/geometry.hpp"

namespace risloc
{

struct BsSpec
{
    Vec2 position;
    std::optional<cplx> pathloss;          // default 1
    std::optional<double> first_pixel_delay; // default: geometric distance / c
};

struct RisSpec
{
    Vec2 origin; // first-pixel position
    double slope = 0.0;
    int length_pixels = 0;
    double pixel_spacing = 0.0;
    int side = +1;
    ProfileMode profile = ProfileMode::mirror;
    std::optional<std::uint64_t> seed; // overrides the derived profile seed
    BsSpec bs;
};

struct PilotSpec
{
    double f_start_hz = 0.0;
    double f_stop_hz = 0.0;
    std::size_t f_count = 0;
    double t_span_s = 0.0;
    std::size_t t_count = 0;
    double tx_power = 1.0;
};

struct AxisSpec
{
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    std::vector<double> samples() const;
};

struct GridSpec
{
    AxisSpec x;
    AxisSpec y;
};

struct Scenario
{
    std::vector<RisSpec> ris;
    PilotSpec pilots;
    double speed_mps = 0.0;
    double snr_db = 0.0;
    GridSpec grid;
    std::vector<Vec2> ue; // optional explicit UE positions
    std::uint64_t seed = 0;

    double carrier_hz() const { return 0.5 * (pilots.f_start_hz + pilots.f_stop_hz); }
    /// Transmit-referenced noise variance: sigma_n^2 = P_tx 10^(-SNR/10).
    double noise_variance() const;
    MotionModel motion() const { return MotionModel{speed_mps}; }

    RisSegment segment(std::size_t r) const;
    BsLink link(std::size_t r) const;
    PilotGrid pilot_grid() const;
    std::uint64_t profile_seed(std::size_t r) const;
    RisProfile profile_for(std::size_t r) const;

    /// Structural validation; `positioning` additionally requires at least
    /// two non-parallel RISs. Throws ValidationError naming the violated
    /// invariant.
    void validate(bool positioning) const;
};

/// Parses and validates a scenario file. Parse failures carry file/field
/// context; validation failures name the invariant.
Scenario load_scenario(const std::string &path);

/// Canonical JSON emission; save -> load -> save is byte-stable.
void save_scenario(const Scenario &scenario, const std::string &path);

std::string to_json_string(const Scenario &scenario);
Scenario from_json_string(const std::string &text, const std::string &context);

} // namespace risloc

#endif
