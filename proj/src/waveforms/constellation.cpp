#include "jrc/waveforms/constellation.hpp"

#include <bit>
#include <cmath>

namespace jrc {

Constellation Constellation::qpsk() {
    const double a = 1.0 / std::sqrt(2.0);
    return {{{a, a}, {a, -a}, {-a, a}, {-a, -a}}};
}

int Constellation::bits_per_symbol() const { return std::countr_zero(points.size()); }

void Constellation::validate() const {
    require(points.size() >= 2 && std::has_single_bit(points.size()),
            "constellation: size must be a power of two >= 2");
    double p = 0.0;
    for (const auto& s : points) p += std::norm(s);
    p /= static_cast<double>(points.size());
    require(std::abs(p - 1.0) < 1e-9, "constellation: mean power must be 1");
}

bool Constellation::contains(cdouble s, double tol) const {
    for (const auto& c : points)
        if (std::abs(c - s) <= tol) return true;
    return false;
}

std::size_t Constellation::decide(cdouble y) const {
    std::size_t best = 0;
    double best_d = std::norm(y - points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d = std::norm(y - points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<cdouble> Constellation::map(std::span<const std::uint8_t> bits) const {
    const auto k = static_cast<std::size_t>(bits_per_symbol());
    require(bits.size() % k == 0, "constellation: bit count not a multiple of bits per symbol");
    std::vector<cdouble> out(bits.size() / k);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < k; ++b) idx = (idx << 1) | (bits[s * k + b] & 1u);
        out[s] = points[idx];
    }
    return out;
}

std::vector<std::uint8_t> Constellation::unmap(std::span<const std::size_t> indices) const {
    const auto k = static_cast<std::size_t>(bits_per_symbol());
    std::vector<std::uint8_t> out(indices.size() * k);
    for (std::size_t s = 0; s < indices.size(); ++s)
        for (std::size_t b = 0; b < k; ++b) out[s * k + b] = static_cast<std::uint8_t>((indices[s] >> (k - 1 - b)) & 1u);
    return out;
}

}  // namespace jrc
