// Copyright 2026 The apgame Authors
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

#ifndef APGAME_RNG_H_
#define APGAME_RNG_H_

#include <array>
#include <cstdint>

namespace apgame {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
class Philox4x32 {
 public:
  using Counter = std::array<uint32_t, 4>;
  using Key = std::array<uint32_t, 2>;

  explicit Philox4x32(uint64_t seed)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)} {}

  static Counter Apply(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      const uint64_t p0 = uint64_t{0xD2511F53u} * c[0];
      const uint64_t p1 = uint64_t{0xCD9E8D57u} * c[2];
      c = {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
           static_cast<uint32_t>(p1),
           static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
           static_cast<uint32_t>(p0)};
    }
    return c;
  }

  Counter operator()(const Counter& c) const { return Apply(c, key_); }

  // Two uniforms in (0, 1) with 53-bit resolution.
  std::array<double, 2> Uniforms(const Counter& c) const {
    const Counter r = Apply(c, key_);
    return {ToUnit(r[0], r[1]), ToUnit(r[2], r[3])};
  }

  // Two independent standard normals (Box-Muller).
  std::array<double, 2> Normals(const Counter& c) const;

 private:
  static double ToUnit(uint32_t a, uint32_t b) {
    const uint64_t m = (uint64_t{a >> 5} << 26) | (b >> 6);
    return (static_cast<double>(m) + 0.5) * (1.0 / 9007199254740992.0);
  }
  Key key_;
};

// Stream tags, the fourth counter word.
enum StreamTag : uint32_t {
  kStreamBrownian = 0,
  kStreamUniformR = 1,
  kStreamDeviation = 2,
};

}  // namespace apgame

#endif  // APGAME_RNG_H_
