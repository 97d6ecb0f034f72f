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

#ifndef POPE_FORMAT_HPP_
#define POPE_FORMAT_HPP_

#include <cstdio>
#include <optional>
#include <string>

namespace pope {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// Fraction rendered as a percentage, one decimal: 0.025 -> "2.5".
inline std::string percent1(double fraction) { return fixed(fraction * 100.0, 1); }

// Fraction rendered as a percentage, two decimals: 2/3 -> "66.67".
inline std::string percent2(double fraction) { return fixed(fraction * 100.0, 2); }

inline std::string percent2_or(const std::optional<double>& fraction,
                               const char* fallback = "n/a") {
  return fraction ? percent2(*fraction) : std::string(fallback);
}

}  // namespace pope

#endif  // POPE_FORMAT_HPP_
