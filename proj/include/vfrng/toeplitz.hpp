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

#ifndef VFRNG_TOEPLITZ_HPP
#define VFRNG_TOEPLITZ_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vfrng/bit_vector.hpp"
#include "vfrng/errors.hpp"
#include "vfrng/rng.hpp"

namespace vfrng {

// A j x k binary Toeplitz matrix stored as its defining bit string of
// length j + k - 1. Entry (r, c) is bits[j - 1 - r + c]: the first column
// top to bottom followed by the rest of the first row. Constant along every
// diagonal by construction.
class ToeplitzSeed {
 public:
  ToeplitzSeed(std::uint64_t rows, std::uint64_t cols, BitVector bits)
      : bits_(std::move(bits)), rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
      throw contract_error("seed dimensions must be positive");
    }
    if (rows >= cols) {
      throw contract_error(
          "seed must compress: output length " + std::to_string(rows) +
          " is not smaller than input length " + std::to_string(cols));
    }
    if (bits_.size() != rows + cols - 1) {
      throw contract_error(
          "seed bit count " + std::to_string(bits_.size()) +
          " does not match rows + cols - 1 = " +
          std::to_string(rows + cols - 1));
    }
  }

  std::uint64_t rows() const { return rows_; }
  std::uint64_t cols() const { return cols_; }
  const BitVector& bits() const { return bits_; }

  bool entry(std::uint64_t r, std::uint64_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw contract_error("matrix entry index out of range");
    }
    return bits_.get(rows_ - 1 - r + c);
  }

 private:
  BitVector bits_;
  std::uint64_t rows_;
  std::uint64_t cols_;
};

// Reference product: output bit r is the XOR over columns c of
// entry(r, c) AND data(c). Deliberately literal; the streaming extractor is
// checked against this bit for bit.
inline BitVector multiply_naive(const ToeplitzSeed& seed,
                                const BitVector& data) {
  if (data.size() != seed.cols()) {
    throw contract_error("data length does not match seed columns");
  }
  BitVector out(seed.rows());
  for (std::uint64_t r = 0; r < seed.rows(); ++r) {
    bool acc = false;
    for (std::uint64_t c = 0; c < seed.cols(); ++c) {
      acc ^= seed.entry(r, c) && data.get(c);
    }
    out.set(r, acc);
  }
  return out;
}

struct CollisionBound {
  double probability;  // k * 2^(1-j); underflows to 0 for production sizes
  double log2;         // log2(k) + 1 - j, always finite
};

// Two-universal hash family collision bound for a j x k Toeplitz matrix.
inline CollisionBound collision_probability(std::uint64_t rows,
                                            std::uint64_t cols) {
  if (rows < 1 || cols < 1) {
    throw contract_error("collision bound needs positive dimensions");
  }
  CollisionBound b;
  b.log2 = std::log2(static_cast<double>(cols)) + 1.0 -
           static_cast<double>(rows);
  b.probability = std::exp2(b.log2);
  return b;
}

// Draws a fresh seed from an entropy source. The source must deliver
// ceil((j + k - 1) / 8) bytes or the call refuses rather than padding.
template <ByteSource Source>
ToeplitzSeed generate_seed(std::uint64_t rows, std::uint64_t cols,
                           Source& source) {
  if (rows < 1 || cols <= rows) {
    throw contract_error("seed generation requires 1 <= rows < cols");
  }
  const std::uint64_t nbits = rows + cols - 1;
  std::vector<std::uint8_t> bytes((nbits + 7) / 8);
  const std::size_t got = source.read(bytes);
  if (got < bytes.size()) {
    throw insufficient_entropy_error(
        "entropy source exhausted: needed " + std::to_string(bytes.size()) +
        " bytes, got " + std::to_string(got));
  }
  return ToeplitzSeed(rows, cols, BitVector::from_packed_bytes(bytes, nbits));
}

}  // namespace vfrng

#endif  // VFRNG_TOEPLITZ_HPP
