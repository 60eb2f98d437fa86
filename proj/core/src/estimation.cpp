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

#include "risloc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "risloc/errors.hpp"
#include "risloc/parallel.hpp"

namespace risloc
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

cplx phasor(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// |sum_{k,i} Z[k,i] exp(+j 2pi (tau f_k - nu t_i))|^2, Z = Y .* conj(X).
double periodogram_power(const std::vector<cplx> &z, const PilotGrid &pilots,
                         double tau, double nu)
{
    const std::size_t F = pilots.freq_count();
    const std::size_t T = pilots.time_count();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < T; ++i)
    {
        const cplx wt = phasor(-two_pi * nu * pilots.times[i]);
        cplx row{0.0, 0.0};
        for (std::size_t k = 0; k < F; ++k)
            row += z[i * F + k] * phasor(two_pi * tau * pilots.frequencies[k]);
        acc += row * wt;
    }
    return std::norm(acc);
}

} // namespace

void SearchWindow::validate() const
{
    if (!(delay_max >= delay_min) || !(doppler_max >= doppler_min))
        throw ValidationError("SearchWindow: empty interval");
    if (delay_grid < 1 || doppler_grid < 1)
        throw ValidationError("SearchWindow: coarse grid sizes must be >= 1");
    if (!(delay_tolerance > 0.0) || !(doppler_tolerance > 0.0))
        throw ValidationError("SearchWindow: tolerances must be > 0");
    if (max_refine_iterations < 1)
        throw ValidationError("SearchWindow: iteration cap must be >= 1");
}

SearchWindow SearchWindow::spanning(double delay_lo, double delay_hi,
                                    double doppler_lo, double doppler_hi,
                                    const PilotGrid &pilots)
{
    SearchWindow w;
    w.delay_min = delay_lo;
    w.delay_max = delay_hi;
    w.doppler_min = doppler_lo;
    w.doppler_max = doppler_hi;
    const double dstep = 1.0 / (4.0 * pilots.bandwidth());
    const double nstep = 1.0 / (4.0 * pilots.time_span());
    w.delay_grid = 1 + static_cast<std::size_t>(std::ceil((delay_hi - delay_lo) / dstep));
    w.doppler_grid =
        1 + static_cast<std::size_t>(std::ceil((doppler_hi - doppler_lo) / nstep));
    w.validate();
    return w;
}

AnchorObservation estimate_delay_doppler(const SignalGrid &received,
                                         const PilotGrid &pilots,
                                         const SearchWindow &window,
                                         unsigned threads)
{
    window.validate();
    pilots.validate();
    const std::size_t F = pilots.freq_count();
    const std::size_t T = pilots.time_count();
    if (received.freq_count != F || received.time_count != T)
        throw ValidationError("estimate_delay_doppler: grid dimensions mismatch");

    std::vector<cplx> z(F * T);
    for (std::size_t m = 0; m < z.size(); ++m)
        z[m] = received.values[m] * std::conj(pilots.pilots[m]);

    const std::size_t nt = window.delay_grid;
    const std::size_t nn = window.doppler_grid;
    const double dt = nt > 1 ? (window.delay_max - window.delay_min) /
                                   static_cast<double>(nt - 1)
                             : 0.0;
    const double dn = nn > 1 ? (window.doppler_max - window.doppler_min) /
                                   static_cast<double>(nn - 1)
                             : 0.0;

    // Coarse sweep, factored per Doppler column:
    //   C_k(nu) = sum_i Z[k,i] e^{-j2pi nu t_i}, then per tau the F-sum.
    // The tau phasors are shared across columns, so build the table once.
    std::vector<cplx> tau_table(nt * F);
    for (std::size_t j = 0; j < nt; ++j)
    {
        const double tau = window.delay_min + static_cast<double>(j) * dt;
        for (std::size_t k = 0; k < F; ++k)
            tau_table[j * F + k] = phasor(two_pi * tau * pilots.frequencies[k]);
    }

    std::vector<double> col_power(nn, 0.0);
    std::vector<std::size_t> col_tau(nn, 0);
    parallel_for(nn, threads, [&](std::size_t m) {
        const double nu = window.doppler_min + static_cast<double>(m) * dn;
        std::vector<cplx> c(F, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < T; ++i)
        {
            const cplx wt = phasor(-two_pi * nu * pilots.times[i]);
            for (std::size_t k = 0; k < F; ++k)
                c[k] += z[i * F + k] * wt;
        }
        double best = -1.0;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < nt; ++j)
        {
            cplx acc{0.0, 0.0};
            const cplx *row = &tau_table[j * F];
            for (std::size_t k = 0; k < F; ++k)
                acc += c[k] * row[k];
            const double p = std::norm(acc);
            if (p > best) // strict: keeps the lowest tau on plateaus
            {
                best = p;
                best_j = j;
            }
        }
        col_power[m] = best;
        col_tau[m] = best_j;
    });

    // Deterministic reduction in column order; lexicographic (tau, nu)
    // tie-break.
    double best = -1.0;
    std::size_t bj = 0, bm = 0;
    for (std::size_t m = 0; m < nn; ++m)
    {
        const bool better =
            col_power[m] > best ||
            (col_power[m] == best &&
             (col_tau[m] < bj || (col_tau[m] == bj && m < bm)));
        if (better)
        {
            best = col_power[m];
            bj = col_tau[m];
            bm = m;
        }
    }

    double tau = window.delay_min + static_cast<double>(bj) * dt;
    double nu = window.doppler_min + static_cast<double>(bm) * dn;

    // Quadratic-interpolation refinement with halving steps, clamped to the
    // window.
    double step_t = dt > 0.0 ? dt : window.delay_tolerance * 16.0;
    double step_n = dn > 0.0 ? dn : window.doppler_tolerance * 16.0;
    auto eval = [&](double t, double n) { return periodogram_power(z, pilots, t, n); };
    auto clamp_t = [&](double t) { return std::clamp(t, window.delay_min, window.delay_max); };
    auto clamp_n = [&](double n) { return std::clamp(n, window.doppler_min, window.doppler_max); };

    bool converged = false;
    for (int it = 0; it < window.max_refine_iterations; ++it)
    {
        {
            const double f0 = eval(tau, nu);
            const double fp = eval(clamp_t(tau + step_t), nu);
            const double fm = eval(clamp_t(tau - step_t), nu);
            const double den = fp - 2.0 * f0 + fm;
            if (den < 0.0)
                tau = clamp_t(tau + 0.5 * step_t * (fm - fp) / den);
        }
        {
            const double f0 = eval(tau, nu);
            const double fp = eval(tau, clamp_n(nu + step_n));
            const double fm = eval(tau, clamp_n(nu - step_n));
            const double den = fp - 2.0 * f0 + fm;
            if (den < 0.0)
                nu = clamp_n(nu + 0.5 * step_n * (fm - fp) / den);
        }
        step_t *= 0.5;
        step_n *= 0.5;
        if (step_t <= window.delay_tolerance && step_n <= window.doppler_tolerance)
        {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw EstimationFailureError(
            "estimate_delay_doppler: refinement did not reach tolerance "
            "within the iteration cap");

    AnchorObservation obs;
    obs.mean_delay = tau;
    obs.mean_doppler = nu;
    return obs;
}

LinearFix build_system(const std::vector<PositionLine> &lines)
{
    if (lines.size() < 2)
        throw RankDeficiencyError("build_system: at least two position lines required");
    bool distinct = false;
    for (std::size_t r = 1; r < lines.size(); ++r)
        if (std::abs(lines[r].slope - lines[0].slope) > 1e-9)
            distinct = true;
    if (!distinct)
        throw RankDeficiencyError("build_system: all lines parallel (equal slopes)");

    LinearFix fix;
    fix.slopes.reserve(lines.size());
    fix.rhs.reserve(lines.size());
    for (const PositionLine &line : lines)
    {
        fix.slopes.push_back(line.slope);
        fix.rhs.push_back(line.intercept);
    }
    return fix;
}

Vec2 ls_solve(LinearFix &fix)
{
    if (fix.rows() < 2)
        throw RankDeficiencyError("ls_solve: fewer than two rows");

    // Normal equations for p = [y, x]: K'K p = K'b with K rows [1, -k_r].
    double m11 = 0.0, m12 = 0.0, m22 = 0.0, q1 = 0.0, q2 = 0.0;
    for (std::size_t r = 0; r < fix.rows(); ++r)
    {
        const double k = fix.slopes[r];
        const double b = fix.rhs[r];
        m11 += 1.0;
        m12 += -k;
        m22 += k * k;
        q1 += b;
        q2 += -k * b;
    }
    const double det = m11 * m22 - m12 * m12;
    const double scale = std::max(m11 * m22, m12 * m12);
    if (!(det > 1e-18 * scale))
        throw RankDeficiencyError("ls_solve: K is numerically rank-deficient");

    const double y = (m22 * q1 - m12 * q2) / det;
    const double x = (-m12 * q1 + m11 * q2) / det;
    fix.estimate = {x, y};

    double rss = 0.0;
    for (std::size_t r = 0; r < fix.rows(); ++r)
    {
        const double res = y - fix.slopes[r] * x - fix.rhs[r];
        rss += res * res;
    }
    fix.residual_norm = std::sqrt(rss);

    // cond_2(K) from the eigenvalues of K'K.
    const double tr = m11 + m22;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lmax = tr / 2.0 + disc;
    const double lmin = tr / 2.0 - disc;
    fix.condition = lmin > 0.0 ? std::sqrt(lmax / lmin)
                               : std::numeric_limits<double>::infinity();
    return fix.estimate;
}

} // namespace risloc
