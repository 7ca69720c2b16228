#include "jrc/waveforms/zc.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace jrc {

void ZcParams::validate() const {
    require(length >= 1 && length % 2 == 1, "zc: length must be a positive odd integer, got " + std::to_string(length));
    require(root > 0 && root < length, "zc: root must satisfy 0 < p < L");
    require(std::gcd(root, length) == 1, "zc: gcd(root, length) must be 1");
}

ComplexSequence zc_generate(const ZcParams& params, double sample_period_s) {
    params.validate();
    const long long L = params.length;
    CVec out(static_cast<std::size_t>(L));
    for (long long n = 0; n < L; ++n) {
        // pi p n(n+1)/L = 2 pi (p * n(n+1)/2 mod L) / L
        const long long tri = ((n % (2 * L)) * ((n + 1) % (2 * L)) / 2) % L;
        const long long t = (params.root % L) * tri % L;
        const double phase = -2.0 * kPi * static_cast<double>(t) / static_cast<double>(L);
        out[static_cast<std::size_t>(n)] = {std::cos(phase), std::sin(phase)};
    }
    return {std::move(out), sample_period_s};
}

long long zc_root_design(long long length) {
    require(length >= 3 && length % 2 == 1, "zc_root_design: length must be odd and >= 3");
    const long long lo = (length - 1) / 2;
    const long long hi = (length + 1) / 2;
    if (std::gcd(lo, length) == 1) return lo;
    if (hi < length && std::gcd(hi, length) == 1) return hi;
    throw NoValidRootError("no valid root (L +/- 1)/2 for length " + std::to_string(length));
}

std::vector<long long> sidelobe_residues(const ZcParams& params, long long delay) {
    params.validate();
    const long long L = params.length;
    const long long half = (L - 1) / 2;
    std::vector<long long> out(static_cast<std::size_t>(L));
    for (long long n = 0; n < L; ++n) {
        long long r = mod(params.root * mod(n - delay, L), L);
        if (r > half) r -= L;
        out[static_cast<std::size_t>(n)] = r;
    }
    return out;
}

}  // namespace jrc
