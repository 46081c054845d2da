// Copyright 2026 The vfrng Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VFRNG_ERRORS_HPP
#define VFRNG_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vfrng {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated a documented precondition (bad sizes, empty input, ...).
class contract_error : public error {
 public:
  explicit contract_error(const std::string& what) : error(what) {}
};

// A configuration is internally inconsistent (rates, geometry, block math).
class config_error : public error {
 public:
  explicit config_error(const std::string& what) : error(what) {}
};

// Calibration rejected: degenerate statistics or an unsafe operating point.
class calibration_error : public error {
 public:
  explicit calibration_error(const std::string& what) : error(what) {}
};

// An entropy source ran dry while producing seed material.
class insufficient_entropy_error : public error {
 public:
  explicit insufficient_entropy_error(const std::string& what) : error(what) {}
};

// File or stream level failure; carries the byte offset where it happened.
class io_error : public error {
 public:
  io_error(const std::string& what, std::uint64_t byte_offset)
      : error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  explicit io_error(const std::string& what) : error(what), byte_offset_(0) {}

  std::uint64_t byte_offset() const { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

}  // namespace vfrng

#endif  // VFRNG_ERRORS_HPP
