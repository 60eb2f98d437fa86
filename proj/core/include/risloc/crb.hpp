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
// Fisher information and Cramér–Rao bound chain for the anchor-line
// positioning scheme:
//
//   per-sample gains g  -> 2x2 FIM J over (tau-bar, nu-bar)
//   intercept gradient  -> per-anchor variance c_r = grad' J^{-1} grad
//   stacked system K    -> position bound K# Diag(c) K#' with closed-form
//                          diagonals over the slope set.
//
// The FIM conditions on a known envelope (known g); weight vectors follow
// the frequency-major sample ordering of the signal grids.

#ifndef RISLOC_CRB_HPP
#define RISLOC_CRB_HPP

#include <cstddef>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/geometry.hpp"

namespace risloc
{

/// Per-sample squared-frequency / squared-time weights (scaled by
/// 8 pi^2 / sigma_n^2) and the cross weights k = -sqrt(f .* t).
struct WeightVectors
{
    std::vector<double> f;
    std::vector<double> t;
    std::vector<double> k;
};

/// Per-sample nonnegative gains |H[k,i] * X[k,i]|^2, frequency-major.
struct GainVector
{
    std::vector<double> g;
};

/// 2x2 symmetric Fisher information over (tau-bar, nu-bar).
struct FisherInfo
{
    double tau_tau = 0.0;
    double tau_nu = 0.0;
    double nu_nu = 0.0;

    double det() const { return tau_tau * nu_nu - tau_nu * tau_nu; }
};

/// Symmetric 2x2 matrix, used for the FIM inverse.
struct Mat2Sym
{
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
};

/// Gradient of the position-line intercept with respect to the anchor
/// observation, under the project sign conventions.
struct InterceptGradient
{
    double d_tau = 0.0; // m/s
    double d_nu = 0.0;  // m*s (meters per Hz)
};

/// 2x2 position-error covariance bound over (y, x) plus the per-anchor
/// variances that produced it.
struct CovBound
{
    double yy = 0.0; // CRB of p_y, m^2
    double yx = 0.0;
    double xx = 0.0; // CRB of p_x, m^2
    std::vector<double> anchor_variances;
};

/// Weights of the FIM quadratic forms for the given pilot grid.
/// Throws SingularInformationError when sigma2 <= 0 (infinite information).
WeightVectors weight_vectors(const PilotGrid &pilots, double sigma2);

/// g[m] = |signal[m]|^2 for a grid carrying role 'signal' (H .* X).
GainVector gain_vector(const SignalGrid &signal);

/// J = [[g'f, g'k], [g'k, g't]].
FisherInfo fim(const GainVector &g, const WeightVectors &w);

/// adj(J) / (g' A g) with A = (f t' + t f')/2 - k k'. Equals the direct
/// inverse; throws SingularInformationError when g' A g is not positive.
Mat2Sym fim_inverse(const FisherInfo &J, const GainVector &g,
                    const WeightVectors &w);

/// Analytic d b_r / d(tau-bar, nu-bar) through d = c tau-bar and
/// psi = arccos(c nu-bar / (v f_c)). Throws OutOfDomainError within 1e-9 of
/// the kinematic boundary |c nu-bar| = v f_c (square-root singularity).
InterceptGradient b_gradient(const RisSegment &ris, const AnchorObservation &obs,
                             const MotionModel &motion, double carrier_hz);

/// c_r = grad' J^{-1} grad (never negative for PSD J^{-1}).
double anchor_variance(const InterceptGradient &grad, const Mat2Sym &j_inv);

/// Numeric pseudo-inverse route: K# Diag(c) K#' for K rows [1, -k_r].
/// Throws RankDeficiencyError for fewer than two rows or an all-parallel
/// slope set.
CovBound position_bound(const std::vector<double> &slopes,
                        const std::vector<double> &anchor_variances);

/// Closed-form diagonals over the slope set (independent route used to
/// cross-check position_bound).
struct ClosedFormDiagonals
{
    double yy = 0.0;
    double xx = 0.0;
};

ClosedFormDiagonals closed_form_diagonals(const std::vector<double> &slopes,
                                          const std::vector<double> &anchor_variances);

} // namespace risloc

#endif
