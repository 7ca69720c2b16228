#pragma once

// Deterministic numerical kernels shared by the waveform, channel and
// receiver modules.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "jrc/types.hpp"

namespace jrc {

/// Forward DFT, unnormalized. `size` >= x.size(); x is zero-padded.
Spectrum dft(const ComplexSequence& x, std::size_t size);

/// Inverse DFT carrying the 1/size factor. `size` >= X.size().
ComplexSequence idft(const Spectrum& X, std::size_t size);

/// out[n] = sum_i y[i] conj(x[(i - n) mod N]), evaluated with transforms.
ComplexSequence cyclic_correlate(const ComplexSequence& y, const ComplexSequence& x);

/// Precomputed conj(DFT(reference)) for repeated correlations against one
/// reference. Reentrant.
class CyclicCorrelator {
public:
    explicit CyclicCorrelator(std::span<const cdouble> reference);
    std::size_t size() const { return ref_conj_spec_.size(); }
    void correlate(std::span<const cdouble> y, std::span<cdouble> out) const;
    /// Same as correlate() but takes the received block already in the
    /// frequency domain (unnormalized DFT).
    void correlate_spectrum(std::span<const cdouble> y_spec, std::span<cdouble> out) const;

private:
    CVec ref_conj_spec_;
};

enum class Boundary { zero, cyclic };

/// Windowed-sinc interpolation kernel: Kaiser(beta) window spanning
/// `taps_per_phase` input samples, cutoff at the input Nyquist rate.
class InterpolationKernel {
public:
    static constexpr int kTapsPerPhase = 64;
    static constexpr double kKaiserBeta = 8.0;

    explicit InterpolationKernel(int factor);

    int factor() const { return factor_; }
    /// Half support in high-rate samples; taps vanish for |t| >= half_span().
    int half_span() const { return half_span_; }
    /// Tap at integer high-rate offset t (zero outside the support).
    double tap(long long t) const {
        if (t <= -half_span_ || t >= half_span_) return 0.0;
        return taps_[static_cast<std::size_t>(t + half_span_)];
    }

private:
    int factor_;
    int half_span_;
    std::vector<double> taps_;
};

/// Zero-stuffing by `factor` followed by the windowed-sinc low-pass filter.
/// Samples on the original grid are reproduced exactly.
ComplexSequence upsample_filter(const ComplexSequence& x, int factor,
                                Boundary boundary = Boundary::zero);

/// out[n] = x[n*factor + offset].
ComplexSequence downsample(const ComplexSequence& x, int factor, int offset);

/// Cyclic fractional delay: upsample_filter(x, factor, cyclic), delay by
/// `delay_hi` high-rate samples (cyclically), then downsample(factor, 0).
/// Evaluated directly at the output rate.
CVec delay_cyclic(std::span<const cdouble> x, long long delay_hi, const InterpolationKernel& kernel);

namespace serial {
/// Direct double sum over the zero-stuffed grid; reference for delay_cyclic.
CVec delay_cyclic(std::span<const cdouble> x, long long delay_hi, const InterpolationKernel& kernel);
}  // namespace serial

/// 10 log10(max |x|^2 / mean |x|^2).
double papr_db(const ComplexSequence& x);
double papr_db(std::span<const cdouble> x);

/// Adds CN(0, sigma^2) noise with sigma^2 = P / 10^(snr_db/10), P the mean
/// power of x. An infinite snr_db returns x unchanged.
ComplexSequence awgn(const ComplexSequence& x, double snr_db, std::uint64_t seed);

/// Adds CN(0, noise_variance) noise in place using the given seed.
void add_noise(std::span<cdouble> x, double noise_variance, std::uint64_t seed);

}  // namespace jrc
