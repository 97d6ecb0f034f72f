// Copyright 2026 The popekit Authors.
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

#ifndef POPE_FINGERPRINT_HPP_
#define POPE_FINGERPRINT_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace pope {

// FNV-1a, 64 bit. Used both for content fingerprints and for deriving
// per-image RNG streams, so it must stay bit-stable across releases.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// Accumulates fields into a short hex fingerprint. Fields are
// length-delimited so that ("ab","c") and ("a","bc") hash differently.
class Fingerprinter {
 public:
  Fingerprinter& add(std::string_view field) {
    mix(field.size());
    for (char c : field) mix(static_cast<unsigned char>(c));
    return *this;
  }

  Fingerprinter& add(std::uint64_t value) {
    mix(~std::uint64_t{0});
    mix(value);
    return *this;
  }

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t h = h_;
    for (int i = 15; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = digits[h & 0xf];
      h >>= 4;
    }
    return out;
  }

 private:
  void mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xff;
      h_ *= 1099511628211ull;
    }
  }

  std::uint64_t h_ = 14695981039346656037ull;
};

}  // namespace pope

#endif  // POPE_FINGERPRINT_HPP_
