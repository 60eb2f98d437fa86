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

#include "risloc/crb.hpp"

#include <cmath>
#include <numbers>

#include "risloc/errors.hpp"

namespace risloc
{

WeightVectors weight_vectors(const PilotGrid &pilots, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw SingularInformationError(
            "weight_vectors: sigma_n^2 must be > 0 (infinite information)");

    const std::size_t F = pilots.freq_count();
    const std::size_t T = pilots.time_count();
    const double scale = 8.0 * std::numbers::pi * std::numbers::pi / sigma2;

    WeightVectors w;
    w.f.resize(F * T);
    w.t.resize(F * T);
    w.k.resize(F * T);
    for (std::size_t i = 0; i < T; ++i)
    {
        const double wt = scale * pilots.times[i] * pilots.times[i];
        for (std::size_t k = 0; k < F; ++k)
        {
            const std::size_t m = i * F + k;
            const double wf = scale * pilots.frequencies[k] * pilots.frequencies[k];
            w.f[m] = wf;
            w.t[m] = wt;
            w.k[m] = -std::sqrt(wf * wt);
        }
    }
    return w;
}

GainVector gain_vector(const SignalGrid &signal)
{
    if (signal.role != GridRole::signal)
        throw ValidationError("gain_vector: grid must carry role 'signal'");
    GainVector g;
    g.g.resize(signal.values.size());
    for (std::size_t m = 0; m < g.g.size(); ++m)
        g.g[m] = std::norm(signal.values[m]);
    return g;
}

FisherInfo fim(const GainVector &g, const WeightVectors &w)
{
    if (g.g.size() != w.f.size())
        throw ValidationError("fim: gain/weight length mismatch");
    FisherInfo J;
    for (std::size_t m = 0; m < g.g.size(); ++m)
    {
        J.tau_tau += g.g[m] * w.f[m];
        J.nu_nu += g.g[m] * w.t[m];
        J.tau_nu += g.g[m] * w.k[m];
    }
    return J;
}

Mat2Sym fim_inverse(const FisherInfo &J, const GainVector &g,
                    const WeightVectors &w)
{
    if (g.g.size() != w.f.size())
        throw ValidationError("fim_inverse: gain/weight length mismatch");

    // g'Ag with A = (f t' + t f')/2 - k k' collapses to the dot products.
    double gf = 0.0, gt = 0.0, gk = 0.0;
    for (std::size_t m = 0; m < g.g.size(); ++m)
    {
        gf += g.g[m] * w.f[m];
        gt += g.g[m] * w.t[m];
        gk += g.g[m] * w.k[m];
    }
    const double quad = gf * gt - gk * gk;
    if (!(quad > 1e-14 * gf * gt) || !(quad > 0.0))
        throw SingularInformationError("fim_inverse: g'Ag is not positive "
                                       "(singular Fisher information)");

    Mat2Sym inv;
    inv.a11 = J.nu_nu / quad;
    inv.a12 = -J.tau_nu / quad;
    inv.a22 = J.tau_tau / quad;
    return inv;
}

InterceptGradient b_gradient(const RisSegment &ris, const AnchorObservation &obs,
                             const MotionModel &motion, double carrier_hz)
{
    motion.validate();
    const double c = constants::speed_of_light;
    const double a = c * obs.mean_doppler / (motion.speed * carrier_hz);
    if (std::abs(a) > 1.0 - 1e-9)
        throw OutOfDomainError("b_gradient: |c nu| at the kinematic boundary "
                               "v f_c (derivative singularity)");

    // b = b~ + c tau (s sin(psi) + k cos(psi)), cos(psi) = a.
    const double sin_psi = std::sqrt(1.0 - a * a);
    const double k = ris.slope;
    const double s = static_cast<double>(ris.side);

    InterceptGradient grad;
    grad.d_tau = c * (s * sin_psi + k * a);
    grad.d_nu = c * obs.mean_delay * (k - s * a / sin_psi) * c /
                (motion.speed * carrier_hz);
    return grad;
}

double anchor_variance(const InterceptGradient &grad, const Mat2Sym &j_inv)
{
    return grad.d_tau * grad.d_tau * j_inv.a11 +
           2.0 * grad.d_tau * grad.d_nu * j_inv.a12 +
           grad.d_nu * grad.d_nu * j_inv.a22;
}

namespace
{

void check_rank(const std::vector<double> &slopes)
{
    if (slopes.size() < 2)
        throw RankDeficiencyError("stacked line system needs at least two RISs");
    bool distinct = false;
    for (std::size_t r = 1; r < slopes.size(); ++r)
        if (std::abs(slopes[r] - slopes[0]) > 1e-9)
            distinct = true;
    if (!distinct)
        throw RankDeficiencyError("all RIS slopes equal: K is rank-deficient");
}

} // namespace

CovBound position_bound(const std::vector<double> &slopes,
                        const std::vector<double> &anchor_variances)
{
    if (slopes.size() != anchor_variances.size())
        throw ValidationError("position_bound: slope/variance length mismatch");
    check_rank(slopes);

    const std::size_t R = slopes.size();
    // Numeric pseudo-inverse route: K row r = [1, -k_r], K# = (K'K)^{-1} K'.
    double m11 = 0.0, m12 = 0.0, m22 = 0.0; // K'K
    for (double k : slopes)
    {
        m11 += 1.0;
        m12 += -k;
        m22 += k * k;
    }
    const double det = m11 * m22 - m12 * m12;
    const double i11 = m22 / det;
    const double i12 = -m12 / det;
    const double i22 = m11 / det;

    CovBound bound;
    bound.anchor_variances = anchor_variances;
    for (std::size_t r = 0; r < R; ++r)
    {
        const double k1 = 1.0;
        const double k2 = -slopes[r];
        const double py = i11 * k1 + i12 * k2; // [K#]_{1r}
        const double px = i12 * k1 + i22 * k2; // [K#]_{2r}
        const double c = anchor_variances[r];
        bound.yy += py * py * c;
        bound.yx += py * px * c;
        bound.xx += px * px * c;
    }
    return bound;
}

ClosedFormDiagonals closed_form_diagonals(const std::vector<double> &slopes,
                                          const std::vector<double> &anchor_variances)
{
    if (slopes.size() != anchor_variances.size())
        throw ValidationError("closed_form_diagonals: length mismatch");
    check_rank(slopes);

    const double R = static_cast<double>(slopes.size());
    double sk = 0.0, skk = 0.0;
    for (double k : slopes)
    {
        sk += k;
        skk += k * k;
    }
    const double den = R * skk - sk * sk;

    ClosedFormDiagonals out;
    for (std::size_t r = 0; r < slopes.size(); ++r)
    {
        const double wy = (skk - slopes[r] * sk) / den;
        const double wx = (sk - R * slopes[r]) / den;
        out.yy += wy * wy * anchor_variances[r];
        out.xx += wx * wx * anchor_variances[r];
    }
    return out;
}

} // namespace risloc
