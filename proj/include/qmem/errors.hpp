// Copyright 2026 The qmem Authors
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

namespace qmem {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A physical parameter violates its domain (negative rate, zero coupling...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Closed-form evaluation produced a value it mathematically cannot
/// (complex residue on a real quantity).
class InternalConsistency : public Error {
 public:
  using Error::Error;
};

/// A squared amplitude went negative beyond round-off.
class NumericalDomain : public Error {
 public:
  using Error::Error;
};

/// Integrator refused the grid: local error or trace drift too large.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// No midpoint exists for the requested family parameter.
class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected by validation. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qmem
