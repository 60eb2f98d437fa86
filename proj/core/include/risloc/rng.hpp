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
// Seeded randomness with pinned bit-level output. std::mt19937_64 is fully
// specified by the standard; the distributions are not, so uniform and
// Gaussian variates are produced here explicitly. Byte-identical outputs
// across platforms and thread counts depend on this.

#ifndef RISLOC_RNG_HPP
#define RISLOC_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace risloc
{

/// splitmix64 finalizer (public-domain constants).
inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Splittable seed scheme: every (stream, index) pair gets an independent
/// seed from the master, so subsets of work reproduce in isolation.
/// Streams in use: 1 = RIS profiles (index = RIS index), 2 = Monte-Carlo
/// noise (index = (trial << 16) + RIS index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index)
{
    std::uint64_t s = mix64(master ^ (0xA0761D6478BD642Full * (stream + 1)));
    return mix64(s ^ (0xE7037ED1A0B428DBull * (index + 1)));
}

class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pair cached).
    double gaussian()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * uniform01();
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    /// Circularly-symmetric complex Gaussian with per-entry variance `var`.
    std::complex<double> complex_gaussian(double var)
    {
        const double s = std::sqrt(var / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

    /// Uniform over {-1, +1}.
    double sign() { return (engine_() & 1ull) ? 1.0 : -1.0; }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace risloc

#endif
