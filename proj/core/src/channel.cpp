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

#include "risloc/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "risloc/errors.hpp"
#include "risloc/rng.hpp"

namespace risloc
{

namespace
{
constexpr double two_pi = 2.0 * std::numbers::pi;

cplx phasor(double angle) { return {std::cos(angle), std::sin(angle)}; }
} // namespace

void PilotGrid::validate() const
{
    if (frequencies.empty() || times.empty())
        throw ValidationError("PilotGrid: F and T must be >= 1");
    for (std::size_t k = 1; k < frequencies.size(); ++k)
        if (!(frequencies[k] > frequencies[k - 1]))
            throw ValidationError("PilotGrid: frequencies must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("PilotGrid: times must be strictly increasing");
    if (!(tx_power > 0.0))
        throw ValidationError("PilotGrid: tx_power must be > 0");
    if (pilots.size() != frequencies.size() * times.size())
        throw ValidationError("PilotGrid: pilot grid size mismatch");
    const double mag = std::sqrt(tx_power);
    for (const cplx &x : pilots)
        if (std::abs(std::abs(x) - mag) > 1e-9 * mag)
            throw ValidationError("PilotGrid: |X| must equal sqrt(tx_power)");
}

PilotGrid make_pilot_grid(double f_start_hz, double f_stop_hz, std::size_t f_count,
                          double t_span_s, std::size_t t_count, double tx_power)
{
    PilotGrid g;
    g.tx_power = tx_power;
    g.frequencies.resize(f_count);
    g.times.resize(t_count);
    for (std::size_t k = 0; k < f_count; ++k)
        g.frequencies[k] =
            f_count == 1 ? f_start_hz
                         : f_start_hz + (f_stop_hz - f_start_hz) *
                               static_cast<double>(k) / static_cast<double>(f_count - 1);
    for (std::size_t i = 0; i < t_count; ++i)
        g.times[i] = t_count == 1 ? 0.0
                                  : t_span_s * static_cast<double>(i) /
                                        static_cast<double>(t_count - 1);
    g.pilots.assign(f_count * t_count, cplx{std::sqrt(tx_power), 0.0});
    g.validate();
    return g;
}

void RisProfile::validate() const
{
    if (coefficients.empty())
        throw ValidationError("RisProfile: empty coefficient vector");
    if (mode == ProfileMode::mirror)
    {
        for (const cplx &c : coefficients)
            if (c != cplx{1.0, 0.0})
                throw ValidationError("RisProfile: mirror mode requires all-ones");
    }
    else if (mode == ProfileMode::random)
    {
        for (const cplx &c : coefficients)
            if (c != cplx{1.0, 0.0} && c != cplx{-1.0, 0.0})
                throw ValidationError("RisProfile: random mode requires +-1 entries");
    }
}

RisProfile make_profile(ProfileMode mode, int pixel_count, std::uint64_t seed)
{
    if (pixel_count < 1)
        throw ValidationError("make_profile: pixel_count must be >= 1");
    RisProfile p;
    p.mode = mode;
    p.coefficients.resize(static_cast<std::size_t>(pixel_count), cplx{1.0, 0.0});
    if (mode == ProfileMode::random)
    {
        Rng rng(seed);
        for (cplx &c : p.coefficients)
            c = cplx{rng.sign(), 0.0};
    }
    return p;
}

BsLink make_bs_link(const RisSegment &ris, Vec2 bs_position, cplx pathloss)
{
    const Vec2 r = ris.origin - bs_position;
    const double dist = r.norm();
    if (!(dist > 0.0))
        throw DegenerateGeometryError("make_bs_link: BS coincides with the RIS origin");

    BsLink link;
    link.position = bs_position;
    link.pathloss = pathloss;
    link.first_pixel_delay = dist / constants::speed_of_light;
    const Vec2 e = ris.direction();
    const double s = (e.x * r.x + e.y * r.y) / dist;
    link.arrival_angle = std::asin(std::clamp(s, -1.0, 1.0));
    return link;
}

std::vector<cplx> steering_vector(const RisSegment &ris, double freq_hz,
                                  double arrival_angle)
{
    std::vector<cplx> out(static_cast<std::size_t>(ris.pixel_count));
    const double step = -two_pi * freq_hz * ris.pixel_spacing *
                        std::sin(arrival_angle) / constants::speed_of_light;
    for (int n = 0; n < ris.pixel_count; ++n)
        out[static_cast<std::size_t>(n)] = phasor(step * n);
    return out;
}

std::vector<cplx> bs_channel(const BsLink &link, const RisSegment &ris,
                             double freq_hz)
{
    std::vector<cplx> out = steering_vector(ris, freq_hz, link.arrival_angle);
    const cplx common =
        link.pathloss * phasor(-two_pi * link.first_pixel_delay * freq_hz);
    for (cplx &v : out)
        v *= common;
    return out;
}

std::vector<cplx> ue_channel(const RisSegment &ris, const PathParams &params,
                             double freq_hz, double time_s)
{
    if (params.delays.size() != static_cast<std::size_t>(ris.pixel_count))
        throw ValidationError("ue_channel: PathParams size mismatch");
    std::vector<cplx> out(params.delays.size());
    for (std::size_t n = 0; n < out.size(); ++n)
    {
        const double tau = params.delays[n];
        if (!(tau > 0.0))
            throw DegenerateGeometryError("ue_channel: non-positive delay");
        const double amp = 1.0 / (constants::speed_of_light * tau *
                                  std::sqrt(4.0 * std::numbers::pi));
        out[n] = amp * phasor(-two_pi * (tau * freq_hz - params.dopplers[n] * time_s));
    }
    return out;
}

FactoredUeChannel ue_channel_factored(const RisSegment &ris,
                                      const PathParams &params,
                                      const AnchorObservation &obs,
                                      double freq_hz, double time_s)
{
    if (params.delays.size() != static_cast<std::size_t>(ris.pixel_count) ||
        obs.residual_delays.size() != params.delays.size())
        throw ValidationError("ue_channel_factored: size mismatch");
    FactoredUeChannel out;
    out.common = phasor(-two_pi * (obs.mean_delay * freq_hz - obs.mean_doppler * time_s));
    out.beta.resize(params.delays.size());
    for (std::size_t n = 0; n < out.beta.size(); ++n)
    {
        const double tau = params.delays[n];
        if (!(tau > 0.0))
            throw DegenerateGeometryError("ue_channel_factored: non-positive delay");
        const double amp = 1.0 / (constants::speed_of_light * tau *
                                  std::sqrt(4.0 * std::numbers::pi));
        out.beta[n] = amp * phasor(-two_pi * (obs.residual_delays[n] * freq_hz -
                                              obs.residual_dopplers[n] * time_s));
    }
    return out;
}

AssembledChannel assemble_channel(const RisSegment &ris, const RisProfile &profile,
                                  const BsLink &link, const PathParams &ue_params,
                                  const PilotGrid &pilots)
{
    if (profile.coefficients.size() != static_cast<std::size_t>(ris.pixel_count) ||
        ue_params.delays.size() != static_cast<std::size_t>(ris.pixel_count))
        throw ValidationError("assemble_channel: dimension mismatch");

    const std::size_t F = pilots.freq_count();
    const std::size_t T = pilots.time_count();
    const std::size_t N = static_cast<std::size_t>(ris.pixel_count);
    const AnchorObservation obs = anchor_params(ue_params);

    AssembledChannel out;
    out.channel = {F, T, GridRole::channel, std::vector<cplx>(F * T)};
    out.envelope = {F, T, GridRole::envelope, std::vector<cplx>(F * T)};

    // Per-pixel effective delay folds the BS carrier delay and the steering
    // ramp into one phase; amplitudes carry the spherical-spreading factor.
    // The envelope gamma is accumulated through the factored (mean +
    // residual) route so the Eq.-8 identity is a genuine cross-check rather
    // than a tautology.
    std::vector<double> eff_delay(N);
    std::vector<double> eff_residual(N);
    std::vector<cplx> weight(N);
    const double ramp = ris.pixel_spacing * std::sin(link.arrival_angle) /
                        constants::speed_of_light;
    for (std::size_t n = 0; n < N; ++n)
    {
        const double bs_part = link.first_pixel_delay + static_cast<double>(n) * ramp;
        eff_delay[n] = ue_params.delays[n] + bs_part;
        eff_residual[n] = obs.residual_delays[n] + bs_part;
        const double amp = 1.0 / (constants::speed_of_light * ue_params.delays[n] *
                                  std::sqrt(4.0 * std::numbers::pi));
        weight[n] = profile.coefficients[n] * link.pathloss * amp;
    }

    for (std::size_t i = 0; i < T; ++i)
    {
        const double t = pilots.times[i];
        for (std::size_t k = 0; k < F; ++k)
        {
            const double f = pilots.frequencies[k];
            cplx h{0.0, 0.0};
            cplx g{0.0, 0.0};
            for (std::size_t n = 0; n < N; ++n)
            {
                h += weight[n] *
                     phasor(-two_pi * (eff_delay[n] * f - ue_params.dopplers[n] * t));
                g += weight[n] * phasor(-two_pi * (eff_residual[n] * f -
                                                   obs.residual_dopplers[n] * t));
            }
            out.channel.at(k, i) = h;
            out.envelope.at(k, i) = g * pilots.pilot(k, i);
        }
    }
    return out;
}

SignalGrid apply_pilots(const SignalGrid &channel, const PilotGrid &pilots)
{
    if (channel.freq_count != pilots.freq_count() ||
        channel.time_count != pilots.time_count())
        throw ValidationError("apply_pilots: grid dimensions mismatch");
    SignalGrid out = channel;
    out.role = GridRole::signal;
    for (std::size_t m = 0; m < out.values.size(); ++m)
        out.values[m] *= pilots.pilots[m];
    return out;
}

SignalGrid add_noise(const SignalGrid &signal, const NoiseModel &noise)
{
    if (signal.role != GridRole::signal)
        throw ValidationError("add_noise: input grid must carry role 'signal'");
    if (noise.variance < 0.0)
        throw ValidationError("add_noise: variance must be >= 0");

    SignalGrid out = signal;
    out.role = GridRole::received;
    if (noise.variance > 0.0)
    {
        Rng rng(noise.seed);
        for (cplx &v : out.values)
            v += rng.complex_gaussian(noise.variance);
    }
    return out;
}

} // namespace risloc
