// SPDX-License-Identifier: Apache-2.0
//
// macstbc: space-time block codes with reduced sphere-decoding complexity
// for the two-user MIMO multiple access channel
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

#include "macstbc/matrix.hpp"

namespace macstbc {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream split: the (a, b) pair selects an independent stream
/// of the master seed, so concurrently executed trials draw identical values
/// regardless of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
    s = splitmix64(s ^ splitmix64(a + 1));
    return splitmix64(s ^ splitmix64(b + 1));
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return std::mt19937_64(derive_seed(master, a, b));
}

/// I.i.d. circularly symmetric complex Gaussian entries with unit variance
/// per complex entry (variance 1/2 per real part). Draw order is row-major,
/// real part before imaginary part.
inline Mat<cplx> sample_channel(int tx_antennas, int rx_antennas, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
    Mat<cplx> h(static_cast<std::size_t>(tx_antennas), static_cast<std::size_t>(rx_antennas));
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(r, c) = cplx(re, im);
        }
    return h;
}

}  // namespace macstbc
