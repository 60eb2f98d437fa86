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

#include "risloc/geometry.hpp"

#include <algorithm>
#include <string>

#include "risloc/errors.hpp"

namespace risloc
{

Vec2 RisSegment::pixel_position(int n) const
{
    return origin + direction() * (static_cast<double>(n) * pixel_spacing);
}

void RisSegment::validate() const
{
    if (pixel_count < 1)
        throw ValidationError("RisSegment: pixel_count must be >= 1");
    if (!(pixel_spacing > 0.0))
        throw ValidationError("RisSegment: pixel_spacing must be > 0");
    if (!std::isfinite(slope) || !std::isfinite(intercept))
        throw ValidationError("RisSegment: slope/intercept must be finite");
    if (side != 1 && side != -1)
        throw ValidationError("RisSegment: side must be +1 or -1");

    const Vec2 last = pixel_position(pixel_count - 1);
    for (const Vec2 &p : {origin, last})
    {
        if (std::abs(p.y - (slope * p.x + intercept)) > 1e-9)
            throw ValidationError("RisSegment: pixels are off the line y = k*x + b");
    }
    const double lo = std::min(origin.x, last.x);
    const double hi = std::max(origin.x, last.x);
    if (std::abs(x_range.lo - lo) > 1e-9 || std::abs(x_range.hi - hi) > 1e-9)
        throw ValidationError("RisSegment: x_range does not match the pixel projection");
}

RisSegment make_ris_segment(Vec2 origin, double slope, int pixel_count,
                            double pixel_spacing, int side)
{
    RisSegment ris;
    ris.origin = origin;
    ris.pixel_count = pixel_count;
    ris.pixel_spacing = pixel_spacing;
    ris.slope = slope;
    ris.intercept = origin.y - slope * origin.x;
    ris.side = side;
    const double span = (pixel_count - 1) * pixel_spacing * ris.direction().x;
    ris.x_range = {origin.x, origin.x + span};
    ris.validate();
    return ris;
}

void MotionModel::validate() const
{
    if (!(speed > 0.0))
        throw ValidationError("MotionModel: speed must be > 0");
}

std::vector<Vec2> pixel_positions(const RisSegment &ris)
{
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(ris.pixel_count));
    for (int n = 0; n < ris.pixel_count; ++n)
        out.push_back(ris.pixel_position(n));
    return out;
}

PathParams path_params(const RisSegment &ris, Vec2 ue,
                       const MotionModel &motion, double carrier_hz)
{
    motion.validate();
    PathParams out;
    out.delays.reserve(static_cast<std::size_t>(ris.pixel_count));
    out.dopplers.reserve(static_cast<std::size_t>(ris.pixel_count));

    const double scale = carrier_hz * motion.speed / constants::speed_of_light;
    for (int n = 0; n < ris.pixel_count; ++n)
    {
        const Vec2 p = ris.pixel_position(n);
        const double dist = (p - ue).norm();
        if (!(dist > 0.0))
            throw DegenerateGeometryError(
                "path_params: UE coincides with pixel " + std::to_string(n));
        out.delays.push_back(dist / constants::speed_of_light);
        // nu = -f_c dtau/dt with ue(t) = ue + t*v*(1,0); positive when the
        // UE approaches the pixel.
        out.dopplers.push_back(scale * (p.x - ue.x) / dist);
    }
    return out;
}

AnchorObservation anchor_params(const PathParams &params)
{
    if (params.delays.empty() || params.delays.size() != params.dopplers.size())
        throw ValidationError("anchor_params: empty or inconsistent PathParams");

    const std::size_t n = params.delays.size();
    AnchorObservation obs;
    double st = 0.0;
    double sn = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        st += params.delays[i];
        sn += params.dopplers[i];
    }
    obs.mean_delay = st / static_cast<double>(n);
    obs.mean_doppler = sn / static_cast<double>(n);
    obs.residual_delays.resize(n);
    obs.residual_dopplers.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        obs.residual_delays[i] = params.delays[i] - obs.mean_delay;
        obs.residual_dopplers[i] = params.dopplers[i] - obs.mean_doppler;
    }
    return obs;
}

PolarObservation polar_from_params(const AnchorObservation &obs,
                                   const MotionModel &motion,
                                   double carrier_hz)
{
    motion.validate();
    const double bound = motion.speed * carrier_hz;
    const double num = constants::speed_of_light * obs.mean_doppler;
    if (std::abs(num) > bound * (1.0 + 1e-12))
        throw OutOfDomainError("polar_from_params: |c*nu| exceeds v*f_c; "
                               "inconsistent delay-Doppler estimate");

    PolarObservation polar;
    polar.distance = constants::speed_of_light * obs.mean_delay;
    polar.angle = std::acos(std::clamp(num / bound, -1.0, 1.0));
    return polar;
}

PositionLine position_line(const RisSegment &ris, const PolarObservation &polar)
{
    const double dx = -polar.distance * std::cos(polar.angle);
    const double dy = ris.side * polar.distance * std::sin(polar.angle);

    PositionLine line;
    line.slope = ris.slope;
    line.intercept = ris.intercept + dy - ris.slope * dx;
    line.x_validity = {ris.x_range.lo + dx, ris.x_range.hi + dx};
    return line;
}

} // namespace risloc
