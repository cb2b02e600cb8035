// Copyright 2026 The mmtemb Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace mmt {

/// Base of every error raised by the library. The C API maps each subclass
/// onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value is outside the accepted range of an operation.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Numerical domain failure: zero norms, non-finite values, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or binary input; the message carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration, e.g. a model kind paired with the wrong features.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmt
