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
// Scenario geometry: pixel placement on linear RIS segments, per-pixel
// delay/Doppler, pixel-averaged anchor observations, the polar (d, psi)
// form, and the anchor-shifted position lines used for multilateration.
//
// Conventions (fixed project-wide):
//   * The UE moves along +x with speed v; the x-axis is aligned with the
//     direction of travel.
//   * Doppler is positive when the range to a pixel shrinks:
//       nu_n = -f_c * d(tau_n)/dt.
//   * The anchor-to-UE displacement reconstructed from (d, psi, side) is
//       u = (-cos psi, side * sin psi),
//     which makes the noise-free position line contain the UE exactly.

#ifndef RISLOC_GEOMETRY_HPP
#define RISLOC_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace risloc
{

namespace constants
{
inline constexpr double speed_of_light = 299792458.0; // m/s
}

/// 2D position or displacement in meters.
struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    double norm() const { return std::hypot(x, y); }
};

/// Closed interval of x-coordinates covered by a RIS segment.
struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// One linear RIS: a uniform line array of scattering pixels.
///
/// `origin` is the first-pixel position; pixels advance along the unit
/// direction (1, slope)/sqrt(1 + slope^2), so `x_range.lo == origin.x`.
/// `side` is +1 when the RIS->UE displacement has positive y, -1 otherwise
/// (i.e. which side of the RIS line the UE lies on, for RISs facing the
/// UE region). It resolves the sign that arccos discards.
struct RisSegment
{
    Vec2 origin;
    int pixel_count = 0;
    double pixel_spacing = 0.0; // meters
    double slope = 0.0;         // k_r
    double intercept = 0.0;     // b~_r, meters
    Interval x_range;
    int side = +1;

    Vec2 direction() const
    {
        const double inv = 1.0 / std::sqrt(1.0 + slope * slope);
        return {inv, slope * inv};
    }

    Vec2 pixel_position(int n) const; // 0-based
    double length() const { return (pixel_count - 1) * pixel_spacing; }

    /// Throws ValidationError when an invariant is violated.
    void validate() const;
};

/// Builds a segment from first-pixel position and orientation, filling the
/// derived intercept and x-projection.
RisSegment make_ris_segment(Vec2 origin, double slope, int pixel_count,
                            double pixel_spacing, int side);

/// UE motion: constant speed along the +x axis.
struct MotionModel
{
    double speed = 0.0; // m/s, > 0

    static Vec2 direction() { return {1.0, 0.0}; }
    void validate() const;
};

/// Per-pixel propagation parameters towards the UE.
struct PathParams
{
    std::vector<double> delays;   // tau_n, seconds
    std::vector<double> dopplers; // nu_n, Hz
};

/// Pixel-averaged observation and the zero-mean residuals around it.
struct AnchorObservation
{
    double mean_delay = 0.0;   // tau-bar, seconds
    double mean_doppler = 0.0; // nu-bar, Hz
    std::vector<double> residual_delays;
    std::vector<double> residual_dopplers;
};

/// Polar form of an anchor observation: propagation distance and the angle
/// between the motion direction and the propagation direction.
struct PolarObservation
{
    double distance = 0.0; // d = c * tau-bar, meters
    double angle = 0.0;    // psi, radians in [0, pi]
};

/// Locus of UE positions consistent with one RIS observation: the RIS line
/// translated by the UE-ward displacement.
struct PositionLine
{
    double slope = 0.0;
    double intercept = 0.0; // b_r, meters
    Interval x_validity;
};

/// Positions of all pixels, first to last.
std::vector<Vec2> pixel_positions(const RisSegment &ris);

/// Per-pixel delay and Doppler for a UE at `ue` moving per `motion`.
/// Throws DegenerateGeometryError when the UE coincides with a pixel.
PathParams path_params(const RisSegment &ris, Vec2 ue,
                       const MotionModel &motion, double carrier_hz);

/// Pixel means and residuals.
AnchorObservation anchor_params(const PathParams &params);

/// d = c*tau-bar and psi = arccos(c*nu-bar / (v*f_c)).
/// Throws OutOfDomainError when |c*nu-bar| > v*f_c.
PolarObservation polar_from_params(const AnchorObservation &obs,
                                   const MotionModel &motion,
                                   double carrier_hz);

/// The RIS line shifted by d*(-cos psi, side*sin psi).
PositionLine position_line(const RisSegment &ris,
                           const PolarObservation &polar);

} // namespace risloc

#endif
