#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jrc {

using cdouble = std::complex<double>;
using CVec = std::vector<cdouble>;

/// Speed of light in vacuum (m/s).
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Finite run of complex baseband samples taken every `sample_period_s` seconds.
struct ComplexSequence {
    CVec samples;
    double sample_period_s = 1.0;

    ComplexSequence() = default;
    ComplexSequence(CVec s, double period) : samples(std::move(s)), sample_period_s(period) {}

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    cdouble& operator[](std::size_t i) { return samples[i]; }
    const cdouble& operator[](std::size_t i) const { return samples[i]; }
    std::span<const cdouble> view() const { return samples; }
    std::span<cdouble> view() { return samples; }

    /// Throws std::invalid_argument when the sequence is empty, non-finite
    /// or has a non-positive sample period.
    void validate(const char* what = "sequence") const;
};

/// DFT bins of a sequence; `bin_spacing_hz` = 1 / (size * sample period).
struct Spectrum {
    CVec bins;
    double bin_spacing_hz = 1.0;

    std::size_t size() const { return bins.size(); }
    cdouble& operator[](std::size_t i) { return bins[i]; }
    const cdouble& operator[](std::size_t i) const { return bins[i]; }
};

[[noreturn]] inline void invalid(const std::string& msg) { throw std::invalid_argument(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) invalid(msg);
}

/// Euclidean remainder, always in [0, n).
inline long long mod(long long a, long long n) {
    long long r = a % n;
    return r < 0 ? r + n : r;
}

/// Floor division for signed operands.
inline long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

double energy(std::span<const cdouble> x);
double mean_power(std::span<const cdouble> x);

}  // namespace jrc
