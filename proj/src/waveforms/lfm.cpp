#include "jrc/waveforms/lfm.hpp"

#include <cmath>

namespace jrc {

void LfmSpec::validate() const {
    require(bandwidth_hz >= 0.0, "lfm: bandwidth must be non-negative");
    require(duration_s > 0.0, "lfm: duration must be positive");
    require(sample_period_s > 0.0, "lfm: sample period must be positive");
    require(bandwidth_hz * sample_period_s <= 1.0 + 1e-12, "lfm: bandwidth exceeds the sampling rate (Nyquist)");
    require(std::llround(duration_s / sample_period_s) >= 1, "lfm: duration shorter than one sample");
}

ComplexSequence lfm_generate(const LfmSpec& spec) {
    spec.validate();
    const auto n_samples = static_cast<std::size_t>(std::llround(spec.duration_s / spec.sample_period_s));
    const double K = spec.bandwidth_hz / spec.duration_s;
    const double half = spec.duration_s / 2.0;
    CVec x(n_samples);
    for (std::size_t n = 0; n < n_samples; ++n) {
        const double t = static_cast<double>(n) * spec.sample_period_s - half;
        x[n] = std::polar(1.0, kPi * K * t * t);
    }
    return {std::move(x), spec.sample_period_s};
}

}  // namespace jrc
