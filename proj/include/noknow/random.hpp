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

#ifndef NOKNOW_RANDOM_HPP
#define NOKNOW_RANDOM_HPP

#include <array>
#include <cstdint>

namespace noknow {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Reproducible Wiener increments for one trajectory.
///
/// Every draw is a pure function of (seed, stream_index, substream, position), so
/// distinct trajectories and channels are independent without any sequential
/// generation, and any stream can be replayed from scratch.
///
/// A stream built with `substeps = k` returns increments over dt that are exact sums
/// of k consecutive increments of the stream with the same ids at dt/k. This is what
/// lets convergence studies share one Brownian path across step sizes.
class NoiseStream {
  public:
    NoiseStream(std::uint64_t seed, std::uint64_t stream_index, double dt,
                std::uint32_t substream = 0, std::uint32_t substeps = 1);

    /// Gaussian sample with mean 0 and variance dt; advances the cursor by one.
    double wiener_increment();

    /// Uniform sample on [0, 1); advances the cursor by one. Streams are meant to be
    /// used for one kind of draw only.
    double uniform();

    /// Same seed and trajectory, different channel id, cursor reset.
    NoiseStream substream(std::uint32_t id) const;

    /// Same path at a step `factor` times larger, cursor reset.
    NoiseStream coarsened(std::uint32_t factor) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }
    std::uint32_t substream_id() const { return substream_; }
    std::uint32_t substeps() const { return substeps_; }
    double dt() const { return dt_; }
    std::uint64_t cursor() const { return cursor_; }

  private:
    double standard_normal(std::uint64_t k) const;
    std::array<std::uint32_t, 4> block(std::uint64_t index) const;

    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint32_t substream_;
    std::uint32_t substeps_;
    double dt_;
    std::uint64_t cursor_ = 0;
};

}  // namespace noknow

#endif  // NOKNOW_RANDOM_HPP
