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
// Test-only oracles, independent of the implementation paths they check.

#ifndef RISLOC_TESTS_ORACLES_HPP
#define RISLOC_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/crb.hpp"
#include "risloc/geometry.hpp"
#include "risloc/scenario.hpp"

namespace risloc::test
{

inline double rel_err(double value, double reference)
{
    const double denom = std::max(std::abs(value), std::abs(reference));
    return denom > 0.0 ? std::abs(value - reference) / denom : 0.0;
}

/// Exact delay/Doppler for a single anchor point on a RIS segment. This is
/// the round-trip oracle: the resulting observation is exactly consistent
/// with one on-segment anchor, so the noise-free position line must
/// contain the UE.
inline AnchorObservation anchor_exact_observation(Vec2 anchor, Vec2 ue,
                                                  const MotionModel &motion,
                                                  double carrier_hz)
{
    const double dist = (ue - anchor).norm();
    AnchorObservation obs;
    obs.mean_delay = dist / constants::speed_of_light;
    obs.mean_doppler = carrier_hz * motion.speed / constants::speed_of_light *
                       (anchor.x - ue.x) / dist;
    return obs;
}

/// Central-difference Doppler oracle: nu ~= -f_c (tau(dt) - tau(-dt)) / (2 dt)
/// with the UE displaced along its motion.
inline double finite_difference_doppler(Vec2 pixel, Vec2 ue,
                                        const MotionModel &motion,
                                        double carrier_hz, double dt = 1e-9)
{
    const Vec2 step = MotionModel::direction() * (motion.speed * dt);
    const double tau_p = (pixel - (ue + step)).norm() / constants::speed_of_light;
    const double tau_m = (pixel - (ue - step)).norm() / constants::speed_of_light;
    return -carrier_hz * (tau_p - tau_m) / (2.0 * dt);
}

/// Pairwise expansion of det(J) = g'Ag:
///   sum_{n<m} g_n g_m (sqrt(f_n t_m) - sqrt(f_m t_n))^2.
/// O(M^2); use only on small grids.
inline double pairwise_quadratic_form(const std::vector<double> &g,
                                      const WeightVectors &w)
{
    double acc = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        for (std::size_t m = n + 1; m < g.size(); ++m)
        {
            const double d = std::sqrt(w.f[n] * w.t[m]) - std::sqrt(w.f[m] * w.t[n]);
            acc += g[n] * g[m] * d * d;
        }
    return acc;
}

/// Four-RIS corners scenario used across the suites: RISs centered at
/// (+-d, +-d), each perpendicular to its radial direction, BS radially
/// behind each RIS, UE grid in the middle.
inline Scenario corners_scenario(int pixels, std::size_t f_count,
                                 std::size_t t_count, std::uint64_t seed)
{
    const double fc = 25e9;
    const double dd = constants::speed_of_light / (2.0 * fc);
    const double half = (pixels - 1) * dd / (2.0 * std::sqrt(2.0));
    const double d = 10.0;

    struct Def
    {
        double cx, cy, slope, bx, by;
        int side;
    };
    const Def defs[4] = {{d, d, -1.0, 251.0, 251.0, -1},
                         {d, -d, 1.0, 251.0, -251.0, 1},
                         {-d, d, 1.0, -251.0, 251.0, -1},
                         {-d, -d, -1.0, -251.0, -251.0, 1}};

    Scenario s;
    for (const Def &def : defs)
    {
        RisSpec spec;
        spec.origin = {def.cx - half,
                       def.slope < 0 ? def.cy + half : def.cy - half};
        spec.slope = def.slope;
        spec.length_pixels = pixels;
        spec.pixel_spacing = dd;
        spec.side = def.side;
        spec.profile = ProfileMode::mirror;
        spec.bs.position = {def.bx, def.by};
        s.ris.push_back(spec);
    }
    s.pilots = {24.5e9, 25.5e9, f_count, 0.025, t_count, 1.0};
    s.speed_mps = 10.0;
    s.snr_db = 47.0;
    s.grid.x = {-7.25, 7.25, 10};
    s.grid.y = {-7.25, 7.25, 10};
    s.seed = seed;
    return s;
}

/// Deterministic uniform helper for test-side draws.
class TestRand
{
  public:
    explicit TestRand(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) // inclusive
    {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace risloc::test

#endif
