#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jrc/types.hpp"

namespace jrc {

/// Symbol alphabet. Point index i carries the bits of i, most significant
/// first, so the labeling is fixed by the point order.
struct Constellation {
    std::vector<cdouble> points;

    /// Gray QPSK: 00 -> (1+j)/sqrt2, 01 -> (1-j)/sqrt2, 10 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2.
    static Constellation qpsk();

    std::size_t size() const { return points.size(); }
    int bits_per_symbol() const;
    /// Size is a power of two >= 2 and the mean power is 1.
    void validate() const;
    bool contains(cdouble s, double tol = 1e-9) const;

    /// Minimum-distance decision, ties to the lowest index.
    std::size_t decide(cdouble y) const;

    std::vector<cdouble> map(std::span<const std::uint8_t> bits) const;
    std::vector<std::uint8_t> unmap(std::span<const std::size_t> indices) const;
};

}  // namespace jrc
