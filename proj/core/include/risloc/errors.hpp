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

#ifndef RISLOC_ERRORS_HPP
#define RISLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace risloc
{

/// Base class for all errors raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Scenario or argument fails a documented invariant.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

/// UE coincides with a pixel, zero-length propagation path, etc.
class DegenerateGeometryError : public Error
{
  public:
    using Error::Error;
};

/// Observation lies outside the admissible domain, e.g. |c nu| > v f_c
/// (arccos argument outside [-1, 1]) or the Doppler-to-angle derivative
/// singularity at the kinematic boundary.
class OutOfDomainError : public Error
{
  public:
    using Error::Error;
};

/// Stacked line system has (numerically) rank-deficient K.
class RankDeficiencyError : public Error
{
  public:
    using Error::Error;
};

/// Fisher information matrix is singular (g' A g below tolerance).
class SingularInformationError : public Error
{
  public:
    using Error::Error;
};

/// Delay-Doppler search failed (empty window, refinement cap hit).
class EstimationFailureError : public Error
{
  public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error
{
  public:
    using Error::Error;
};

} // namespace risloc

#endif
