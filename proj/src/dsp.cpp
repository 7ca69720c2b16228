#include "jrc/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jrc/fft.hpp"
#include "jrc/rng.hpp"

namespace jrc {

void ComplexSequence::validate(const char* what) const {
    require(!samples.empty(), std::string(what) + ": empty");
    require(sample_period_s > 0.0 && std::isfinite(sample_period_s),
            std::string(what) + ": sample period must be positive");
    for (const auto& s : samples) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            invalid(std::string(what) + ": non-finite sample");
    }
}

double energy(std::span<const cdouble> x) {
    double e = 0.0;
    for (const auto& v : x) e += std::norm(v);
    return e;
}

double mean_power(std::span<const cdouble> x) {
    return x.empty() ? 0.0 : energy(x) / static_cast<double>(x.size());
}

Spectrum dft(const ComplexSequence& x, std::size_t size) {
    require(size > 0, "dft: size must be positive");
    require(size >= x.size(), "dft: size shorter than input");
    CVec in(size, cdouble{});
    std::copy(x.samples.begin(), x.samples.end(), in.begin());
    Spectrum out;
    out.bins = fft::forward(in);
    out.bin_spacing_hz = 1.0 / (static_cast<double>(size) * x.sample_period_s);
    return out;
}

ComplexSequence idft(const Spectrum& X, std::size_t size) {
    require(size > 0, "idft: size must be positive");
    require(size >= X.size(), "idft: size shorter than spectrum");
    CVec in(size, cdouble{});
    std::copy(X.bins.begin(), X.bins.end(), in.begin());
    CVec out = fft::inverse(in);
    const double scale = 1.0 / static_cast<double>(size);
    for (auto& v : out) v *= scale;
    return {std::move(out), 1.0 / (static_cast<double>(size) * X.bin_spacing_hz)};
}

CyclicCorrelator::CyclicCorrelator(std::span<const cdouble> reference) {
    require(!reference.empty(), "correlator: empty reference");
    ref_conj_spec_ = fft::forward(reference);
    for (auto& v : ref_conj_spec_) v = std::conj(v);
}

void CyclicCorrelator::correlate(std::span<const cdouble> y, std::span<cdouble> out) const {
    require(y.size() == size() && out.size() == size(), "cyclic_correlate: length mismatch");
    CVec spec(size());
    fft::forward(y, spec);
    correlate_spectrum(spec, out);
}

void CyclicCorrelator::correlate_spectrum(std::span<const cdouble> y_spec, std::span<cdouble> out) const {
    require(y_spec.size() == size() && out.size() == size(), "cyclic_correlate: length mismatch");
    const double scale = 1.0 / static_cast<double>(size());
    CVec prod(size());
    for (std::size_t k = 0; k < size(); ++k) prod[k] = y_spec[k] * ref_conj_spec_[k] * scale;
    fft::inverse(prod, out);
}

ComplexSequence cyclic_correlate(const ComplexSequence& y, const ComplexSequence& x) {
    require(y.size() == x.size(), "cyclic_correlate: length mismatch");
    require(!y.empty(), "cyclic_correlate: empty input");
    CyclicCorrelator corr(x.samples);
    ComplexSequence out{CVec(y.size()), y.sample_period_s};
    corr.correlate(y.samples, out.samples);
    return out;
}

InterpolationKernel::InterpolationKernel(int factor) : factor_(factor) {
    require(factor >= 1, "interpolation kernel: factor must be >= 1");
    half_span_ = factor * kTapsPerPhase / 2;
    taps_.resize(static_cast<std::size_t>(2 * half_span_ + 1));
    const double i0b = std::cyl_bessel_i(0.0, kKaiserBeta);
    for (int t = -half_span_; t <= half_span_; ++t) {
        const double u = static_cast<double>(t) / factor;
        const double sinc = (t == 0) ? 1.0 : std::sin(kPi * u) / (kPi * u);
        const double r = static_cast<double>(t) / half_span_;
        const double w = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        taps_[static_cast<std::size_t>(t + half_span_)] = sinc * w;
    }
}

ComplexSequence upsample_filter(const ComplexSequence& x, int factor, Boundary boundary) {
    require(factor >= 1, "upsample_filter: factor must be >= 1");
    x.validate("upsample_filter input");
    if (factor == 1) return x;
    const InterpolationKernel kernel(factor);
    const long long len = static_cast<long long>(x.size());
    const long long out_len = len * factor;
    const long long span = kernel.half_span();
    CVec out(static_cast<std::size_t>(out_len));
    for (long long n = 0; n < out_len; ++n) {
        // taps with |n - k F| < span
        const long long k_lo = floor_div(n - span, factor);
        const long long k_hi = floor_div(n + span, factor) + 1;
        cdouble acc{};
        for (long long k = k_lo; k <= k_hi; ++k) {
            const double h = kernel.tap(n - k * factor);
            if (h == 0.0) continue;
            if (boundary == Boundary::zero) {
                if (k < 0 || k >= len) continue;
                acc += x.samples[static_cast<std::size_t>(k)] * h;
            } else {
                acc += x.samples[static_cast<std::size_t>(mod(k, len))] * h;
            }
        }
        out[static_cast<std::size_t>(n)] = acc;
    }
    return {std::move(out), x.sample_period_s / factor};
}

ComplexSequence downsample(const ComplexSequence& x, int factor, int offset) {
    require(factor >= 1, "downsample: factor must be >= 1");
    require(offset >= 0 && offset < factor, "downsample: offset out of range");
    // every sample x[offset + n factor] inside the input, ceil((len - offset) / factor)
    const auto F = static_cast<std::size_t>(factor), off = static_cast<std::size_t>(offset);
    const std::size_t len = x.size() > off ? (x.size() - off + F - 1) / F : 0;
    CVec out(len);
    for (std::size_t n = 0; n < len; ++n) out[n] = x.samples[n * factor + offset];
    return {std::move(out), x.sample_period_s * factor};
}

CVec delay_cyclic(std::span<const cdouble> x, long long delay_hi, const InterpolationKernel& kernel) {
    require(!x.empty(), "delay_cyclic: empty input");
    const long long len = static_cast<long long>(x.size());
    const long long F = kernel.factor();
    const long long span = kernel.half_span();
    // Every tap offset nF - d - kF is congruent to -d mod F, so a single
    // polyphase branch applies: y[n] = sum_j hp[j] x[(n - D - j) mod len].
    const long long phase = mod(-delay_hi, F);
    const long long D = (delay_hi + phase) / F;
    const long long j_lo = floor_div(-span - phase, F);
    const long long j_hi = floor_div(span - phase, F) + 1;
    std::vector<double> hp;
    long long first = 0;
    for (long long j = j_lo; j <= j_hi; ++j) {
        const double h = kernel.tap(phase + j * F);
        if (h == 0.0) continue;
        if (hp.empty()) first = j;
        hp.resize(static_cast<std::size_t>(j - first + 1), 0.0);
        hp.back() = h;
    }
    const long long taps = static_cast<long long>(hp.size());
    // xe[i] = x[(i + base) mod len] with base = -D - first - taps + 1
    const long long base = -D - first - taps + 1;
    CVec xe(static_cast<std::size_t>(len + taps));
    for (long long i = 0; i < len + taps; ++i) xe[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(mod(i + base, len))];
    CVec out(x.size());
#pragma omp parallel for schedule(static)
    for (long long n = 0; n < len; ++n) {
        // x[(n - D - first - t) mod len] = xe[n + taps - 1 - t]
        const cdouble* src = xe.data() + n + taps - 1;
        double re = 0.0, im = 0.0;
        for (long long t = 0; t < taps; ++t) {
            re += hp[static_cast<std::size_t>(t)] * src[-t].real();
            im += hp[static_cast<std::size_t>(t)] * src[-t].imag();
        }
        out[static_cast<std::size_t>(n)] = {re, im};
    }
    return out;
}

namespace serial {

CVec delay_cyclic(std::span<const cdouble> x, long long delay_hi, const InterpolationKernel& kernel) {
    require(!x.empty(), "delay_cyclic: empty input");
    const long long len = static_cast<long long>(x.size());
    const long long F = kernel.factor();
    const long long span = kernel.half_span();
    CVec out(x.size());
    // y[n] = sum_k x[k mod len] h(nF - d - kF)
    for (long long n = 0; n < len; ++n) {
        const long long c = n * F - delay_hi;
        const long long k_lo = floor_div(c - span, F);
        cdouble acc{};
        for (long long k = k_lo; k * F < c + span; ++k) {
            const double h = kernel.tap(c - k * F);
            if (h != 0.0) acc += x[static_cast<std::size_t>(mod(k, len))] * h;
        }
        out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

}  // namespace serial

double papr_db(std::span<const cdouble> x) {
    require(!x.empty(), "papr_db: empty input");
    double peak = 0.0, sum = 0.0;
    for (const auto& v : x) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        sum += p;
    }
    require(sum > 0.0, "papr_db: all-zero input");
    return 10.0 * std::log10(peak / (sum / static_cast<double>(x.size())));
}

double papr_db(const ComplexSequence& x) { return papr_db(x.view()); }

void add_noise(std::span<cdouble> x, double noise_variance, std::uint64_t seed) {
    if (!(noise_variance > 0.0)) return;
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(noise_variance / 2.0));
    for (auto& v : x) {
        const double re = g(rng);
        const double im = g(rng);
        v += cdouble(re, im);
    }
}

ComplexSequence awgn(const ComplexSequence& x, double snr_db, std::uint64_t seed) {
    ComplexSequence out = x;
    if (std::isinf(snr_db) && snr_db > 0) return out;
    const double p = mean_power(x.view());
    require(p > 0.0, "awgn: input has zero power");
    add_noise(out.samples, p / std::pow(10.0, snr_db / 10.0), seed);
    return out;
}

}  // namespace jrc
