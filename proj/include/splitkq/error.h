// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace splitkq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not line up (inner dimensions, k % 8, group_size | k, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value outside its admissible range (nibble > 15, non-finite float, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A single thread block asks for more than one SM can provide.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk data (bad magic, truncated container, bad profile).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace splitkq
