// Copyright 2026 The decolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace decolab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: bad index, shape mismatch, broken invariant on input.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A dense object would exceed the hard dimension cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Requested outcome has probability at or below the impossibility threshold.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

/// A Fock-space truncation is too small for the requested state.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Gaussian fit window could not be established on the supplied trace.
class FitWindowError : public Error {
 public:
  using Error::Error;
};

/// Ratio rho_{01} / (a b*) is undefined because a or b vanishes.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

}  // namespace decolab
