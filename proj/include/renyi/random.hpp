// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace renyi {

/// Uniform double in [0,1) built from the top 53 bits of one engine draw.
/// std::uniform_real_distribution is implementation-defined; this keeps
/// seeded runs byte-reproducible across standard libraries.
inline double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace renyi
