// Copyright 2026 The noknow Authors
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

#include "noknow/random.hpp"

#include <cmath>
#include <numbers>

#include "noknow/errors.hpp"

namespace noknow {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// 53 random bits -> [0, 1).
double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream_index, double dt,
                         std::uint32_t substream, std::uint32_t substeps)
    : seed_(seed), stream_index_(stream_index), substream_(substream), substeps_(substeps), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("noise stream dt must be positive");
    if (substeps == 0) throw ConfigError("noise stream substeps must be >= 1");
}

std::array<std::uint32_t, 4> NoiseStream::block(std::uint64_t index) const {
    if (index >> 32) throw ResourceError("noise stream exhausted (2^32 blocks)");
    return philox4x32({static_cast<std::uint32_t>(index), substream_,
                       static_cast<std::uint32_t>(stream_index_),
                       static_cast<std::uint32_t>(stream_index_ >> 32)},
                      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

// Box-Muller; each block yields two normals.
double NoiseStream::standard_normal(std::uint64_t k) const {
    const auto r = block(k / 2);
    const double u1 = 1.0 - to_unit(r[0], r[1]);  // (0, 1]
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (k % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

double NoiseStream::wiener_increment() {
    const double fine_dt = dt_ / substeps_;
    const std::uint64_t first = cursor_ * substeps_;
    double sum = 0.0;
    for (std::uint32_t j = 0; j < substeps_; ++j) sum += standard_normal(first + j);
    ++cursor_;
    return sum * std::sqrt(fine_dt);
}

double NoiseStream::uniform() {
    const auto r = block(cursor_);
    ++cursor_;
    return to_unit(r[0], r[1]);
}

NoiseStream NoiseStream::substream(std::uint32_t id) const {
    return NoiseStream(seed_, stream_index_, dt_, id, substeps_);
}

NoiseStream NoiseStream::coarsened(std::uint32_t factor) const {
    if (factor == 0) throw ConfigError("coarsening factor must be >= 1");
    return NoiseStream(seed_, stream_index_, dt_ * factor, substream_, substeps_ * factor);
}

}  // namespace noknow
