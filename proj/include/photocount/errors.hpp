// Copyright 2026 The photocount authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHOTOCOUNT_ERRORS_HPP
#define PHOTOCOUNT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace photocount {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A series or iteration exhausted its term budget before reaching tolerance.
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// A count-conditioned map was requested on a state that cannot produce a count.
class VacuumOnly : public Error {
 public:
  using Error::Error;
};

/// Normalizing by a probability that is (numerically) zero.
class ZeroProbability : public Error {
 public:
  using Error::Error;
};

/// A closed-form family formula was requested for a family that has none.
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

/// A brute-force construction was requested beyond its supported count order.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// The integrator could not satisfy its step-refinement criterion at h_min.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// A conditioned state accumulated too much mass at the truncation edge.
class TruncationExhausted : public Error {
 public:
  using Error::Error;
};

/// A conditioned Monte Carlo estimate has too few samples to be meaningful.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

}  // namespace photocount

#endif  // PHOTOCOUNT_ERRORS_HPP
