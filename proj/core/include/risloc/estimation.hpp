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
// Delay-Doppler recovery and the stacked-line position fix.
//
// The observation per RIS is a single dominant cisoid in (f, t) with a
// slowly varying envelope, so (tau-bar, nu-bar) are recovered by a 2D
// periodogram / matched-filter peak search over a coarse grid followed by
// local quadratic-interpolation refinement. The envelope is an unknown
// nuisance and is never estimated.

#ifndef RISLOC_ESTIMATION_HPP
#define RISLOC_ESTIMATION_HPP

#include <cstddef>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/geometry.hpp"

namespace risloc
{

/// Coarse search region and refinement budget for the periodogram peak.
/// A meaningful estimate requires the window to contain the true
/// parameters (and, for sparse pilot grids, to stay inside the unambiguous
/// ranges 1/df and 1/dt).
struct SearchWindow
{
    double delay_min = 0.0;    // s
    double delay_max = 0.0;    // s
    double doppler_min = 0.0;  // Hz
    double doppler_max = 0.0;  // Hz
    std::size_t delay_grid = 0;   // coarse sample counts, >= 1
    std::size_t doppler_grid = 0;
    double delay_tolerance = 1e-13;  // refinement stops below these steps
    double doppler_tolerance = 1e-4;
    int max_refine_iterations = 100;

    void validate() const;

    /// Window covering [lo, hi] with coarse steps <= 1/(4 bandwidth) and
    /// <= 1/(4 time span).
    static SearchWindow spanning(double delay_lo, double delay_hi,
                                 double doppler_lo, double doppler_hi,
                                 const PilotGrid &pilots);
};

/// Stacked system K p = b over p = [y, x] (component order fixed by the
/// row pattern [1, -k_r]) plus the solve diagnostics.
struct LinearFix
{
    std::vector<double> slopes;     // k_r per row; row r of K is [1, -k_r]
    std::vector<double> rhs;        // b_r, meters
    Vec2 estimate;                  // solved UE position
    double residual_norm = 0.0;     // ||K p - b||, meters
    double condition = 0.0;         // cond_2(K)

    std::size_t rows() const { return slopes.size(); }
};

/// Matched-filter ML estimate of (tau-bar, nu-bar): maximizes
/// |sum_{k,i} Y[k,i] X*[k,i] exp(+j 2 pi (tau f_k - nu t_i))|^2 over the
/// coarse grid, then refines by parabolic interpolation. Ties break toward
/// the lexicographically smallest (tau, nu). Residual vectors are empty.
/// Throws EstimationFailureError when refinement fails to converge.
AnchorObservation estimate_delay_doppler(const SignalGrid &received,
                                         const PilotGrid &pilots,
                                         const SearchWindow &window,
                                         unsigned threads = 1);

/// K and b from the per-RIS position lines. Throws RankDeficiencyError for
/// fewer than two lines or an all-parallel set (slopes equal within 1e-9).
LinearFix build_system(const std::vector<PositionLine> &lines);

/// Least-squares fix p = (K'K)^{-1} K' b; fills estimate, residual norm and
/// condition diagnostic, and returns the estimate.
Vec2 ls_solve(LinearFix &fix);

} // namespace risloc

#endif
