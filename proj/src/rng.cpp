/*
   Copyright 2026 The spotvol Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "spotvol/rng.hpp"

#include <cmath>
#include <numbers>

namespace spotvol {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ typedef unsigned __int128 uint128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const uint128 p = static_cast<uint128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline Philox4x64::Counter round(const Philox4x64::Counter& c, const Philox4x64::Key& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

Philox4x64::Counter Philox4x64::generate(Counter counter, Key key) noexcept {
    counter = round(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        counter = round(counter, key);
    }
    return counter;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return mix64(mix64(base_seed + kWeyl0) ^ (index * kWeyl1 + 1));
}

std::array<double, 4> NormalStream::block(std::uint64_t block_index) const noexcept {
    const auto bits = Philox4x64::generate({block_index, stream_, 0, 0}, key_);
    std::array<double, 4> z{};
    for (int pair = 0; pair < 2; ++pair) {
        const double u1 = to_unit_open_closed(bits[2 * pair]);
        const double u2 = to_unit_open_closed(bits[2 * pair + 1]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        z[2 * pair] = r * std::cos(theta);
        z[2 * pair + 1] = r * std::sin(theta);
    }
    return z;
}

double NormalStream::at(std::uint64_t index) const noexcept { return block(index / 4)[index % 4]; }

void NormalStream::fill(std::uint64_t first, std::span<double> out) const noexcept {
    std::size_t j = 0;
    std::uint64_t index = first;
    while (j < out.size()) {
        const auto z = block(index / 4);
        for (std::uint64_t slot = index % 4; slot < 4 && j < out.size(); ++slot, ++j, ++index) {
            out[j] = z[slot];
        }
    }
}

} // namespace spotvol
