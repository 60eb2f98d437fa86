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
// BS -> RIS -> UE channel synthesis on an F x T pilot grid. The channel for
// one RIS factors as
//
//   H[k,i] = h_ue(f_k, t_i)^T Diag(profile) h_bs(f_k)
//
// with a far-field BS->RIS link and per-pixel near-field UE links carrying
// (tau_n, nu_n). The UE side also factors into a common phasor at the pixel
// means times a slowly varying residual vector beta.

#ifndef RISLOC_CHANNEL_HPP
#define RISLOC_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "risloc/geometry.hpp"

namespace risloc
{

using cplx = std::complex<double>;

/// Pilot resources: frequency samples, time samples, and the transmitted
/// symbols X (constant-magnitude sqrt(tx_power) per sample).
struct PilotGrid
{
    std::vector<double> frequencies; // Hz, strictly increasing, length F
    std::vector<double> times;       // s, strictly increasing, length T
    double tx_power = 1.0;           // watts
    std::vector<cplx> pilots;        // X, frequency-major (k fastest)

    std::size_t freq_count() const { return frequencies.size(); }
    std::size_t time_count() const { return times.size(); }
    std::size_t sample_count() const { return pilots.size(); }
    cplx pilot(std::size_t k, std::size_t i) const
    {
        return pilots[i * freq_count() + k];
    }
    double bandwidth() const { return frequencies.back() - frequencies.front(); }
    double time_span() const { return times.back() - times.front(); }
    double center_frequency() const
    {
        return 0.5 * (frequencies.front() + frequencies.back());
    }

    void validate() const;
};

/// Uniform pilot grid: F frequencies across [f_start, f_stop], T times
/// across [0, t_span], all pilots sqrt(tx_power).
PilotGrid make_pilot_grid(double f_start_hz, double f_stop_hz, std::size_t f_count,
                          double t_span_s, std::size_t t_count, double tx_power);

enum class ProfileMode
{
    mirror, // all coefficients 1
    random, // i.i.d. uniform over {-1, +1}
    custom,
};

/// Per-pixel scattering coefficients of one RIS.
struct RisProfile
{
    std::vector<cplx> coefficients;
    ProfileMode mode = ProfileMode::mirror;

    void validate() const;
};

/// mirror -> all ones; random -> seeded +-1 draws, reproducible per seed.
RisProfile make_profile(ProfileMode mode, int pixel_count, std::uint64_t seed);

/// Far-field link from a BS to the first pixel of a RIS.
struct BsLink
{
    Vec2 position;            // BS position, meters
    cplx pathloss = {1.0, 0}; // alpha_BS
    double first_pixel_delay = 0.0; // tau-bar^BS, seconds
    double arrival_angle = 0.0;     // phi, radians from broadside
};

/// Fills delay and arrival angle from the geometry; pathloss passes through.
BsLink make_bs_link(const RisSegment &ris, Vec2 bs_position, cplx pathloss);

enum class GridRole : std::uint8_t
{
    channel,  // H
    signal,   // H .* X
    received, // Y
    envelope, // gamma
};

/// Complex F x T grid stored frequency-major (k fastest).
struct SignalGrid
{
    std::size_t freq_count = 0;
    std::size_t time_count = 0;
    GridRole role = GridRole::channel;
    std::vector<cplx> values;

    cplx &at(std::size_t k, std::size_t i) { return values[i * freq_count + k]; }
    cplx at(std::size_t k, std::size_t i) const { return values[i * freq_count + k]; }
};

/// Additive white circularly-symmetric complex Gaussian noise.
struct NoiseModel
{
    double variance = 0.0; // sigma_n^2, per complex sample
    std::uint64_t seed = 0;
};

/// Array factor of Eq-style ULA: element n = exp(-j 2pi f (n-1) dd sin(phi) / c).
std::vector<cplx> steering_vector(const RisSegment &ris, double freq_hz,
                                  double arrival_angle);

/// alpha_BS * exp(-j 2pi tau_bs f) * steering_vector.
std::vector<cplx> bs_channel(const BsLink &link, const RisSegment &ris,
                             double freq_hz);

/// Per-pixel UE-side channel at one (f, t) sample:
/// element n = exp(-j 2pi (tau_n f - nu_n t)) / (c tau_n sqrt(4 pi)).
std::vector<cplx> ue_channel(const RisSegment &ris, const PathParams &params,
                             double freq_hz, double time_s);

/// Factored form of the UE-side channel: common phasor at the pixel means
/// times the residual vector beta. common * beta[n] equals ue_channel[n].
struct FactoredUeChannel
{
    cplx common;             // exp(-j 2pi (tau-bar f - nu-bar t))
    std::vector<cplx> beta;  // residual-phase, amplitude-carrying vector
};

FactoredUeChannel ue_channel_factored(const RisSegment &ris,
                                      const PathParams &params,
                                      const AnchorObservation &obs,
                                      double freq_hz, double time_s);

/// Full channel grid H plus the slowly varying envelope gamma with
/// H[k,i] * X[k,i] == gamma[k,i] * exp(-j 2pi (tau-bar f_k - nu-bar t_i)).
struct AssembledChannel
{
    SignalGrid channel;  // H, role = channel
    SignalGrid envelope; // gamma, role = envelope
};

AssembledChannel assemble_channel(const RisSegment &ris, const RisProfile &profile,
                                  const BsLink &link, const PathParams &ue_params,
                                  const PilotGrid &pilots);

/// Element-wise H .* X.
SignalGrid apply_pilots(const SignalGrid &channel, const PilotGrid &pilots);

/// Y = signal + W, W i.i.d. CN(0, sigma_n^2) per entry, deterministic per seed.
SignalGrid add_noise(const SignalGrid &signal, const NoiseModel &noise);

} // namespace risloc

#endif
