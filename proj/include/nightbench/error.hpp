// Copyright 2026 The nightbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace nightbench {

// Root of every error thrown by the library. Each subclass corresponds to one
// failure category the command-line front end maps onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid numeric parameter (negative sigma, non-positive gamma, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, decoded or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed text record (annotation line, config entry).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Sequence directory violates its layout contract.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Metric evaluated on degenerate geometry (zero-area union, zero diagonal).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN or infinity where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreprocessError : public Error {
 public:
  using Error::Error;
};

class TrackingError : public Error {
 public:
  using Error::Error;
};

// Bad command-line or configuration input; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace nightbench
