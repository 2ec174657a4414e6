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

#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace spotvol {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (counter, key); there is no hidden state, so any draw can be
/// recomputed from its index.
class Philox4x64 {
public:
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static constexpr const char* algorithm_name() { return "philox4x64-10"; }

    static Counter generate(Counter counter, Key key) noexcept;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of replication `index` under `base_seed`. Depends on nothing else,
/// so serial and parallel runs see the same per-path seeds.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// Map 64 random bits to a double in (0, 1].
inline double to_unit_open_closed(std::uint64_t bits) noexcept {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Random-access stream of standard normal variates. Variate i of stream
/// s under seed k is fixed: block i/4 of Philox with counter (i/4, s, 0, 0)
/// and key (k, stream salt) gives four uniforms, turned into two
/// Box-Muller pairs.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{seed, 0x53504f54564f4c00ULL}, stream_(stream) {}

    double at(std::uint64_t index) const noexcept;

    /// out[j] = at(first + j).
    void fill(std::uint64_t first, std::span<double> out) const noexcept;

private:
    std::array<double, 4> block(std::uint64_t block_index) const noexcept;

    Philox4x64::Key key_;
    std::uint64_t stream_;
};

} // namespace spotvol
