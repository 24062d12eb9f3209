// Copyright 2026 The gramevo Authors.
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

#ifndef GRAMEVO_RANDOM_HPP
#define GRAMEVO_RANDOM_HPP

#include <cstdint>
#include <random>
#include <stdexcept>

namespace gramevo {

// Seeded 64-bit Mersenne Twister with bounded draws defined here rather than
// through std distributions, whose output differs between standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : engine_(seed)
    {
    }

    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound)
    {
        if (bound == 0) {
            throw std::invalid_argument("RandomStream::below: bound must be positive");
        }
        // reject the low end so the remaining range is a multiple of bound
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            auto r = engine_();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    // Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double probability) { return uniform() < probability; }

private:
    std::mt19937_64 engine_;
};

} // namespace gramevo

#endif
