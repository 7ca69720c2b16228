#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jrc/types.hpp"

namespace jrc {

/// Odd length and root of a Zadoff-Chu sequence.
struct ZcParams {
    long long length = 0;
    long long root = 0;

    void validate() const;
    friend bool operator==(const ZcParams&, const ZcParams&) = default;
};

/// Raised by zc_root_design when neither (L-1)/2 nor (L+1)/2 is coprime to L.
class NoValidRootError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// b[n] = exp(-j pi p n (n+1) / L), n = 0..L-1. Phases are reduced in
/// integer arithmetic, so long sequences stay exact to rounding.
ComplexSequence zc_generate(const ZcParams& params, double sample_period_s = 1.0);

/// Doppler-robust root: (L-1)/2 when coprime with L, otherwise (L+1)/2.
long long zc_root_design(long long length);

/// <p (n - delay)>_L mapped into [-(L-1)/2, (L-1)/2] for n = 0..L-1.
/// The result is a permutation of that interval whenever gcd(p, L) = 1.
std::vector<long long> sidelobe_residues(const ZcParams& params, long long delay);

}  // namespace jrc
