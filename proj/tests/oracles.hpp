#pragma once

// Direct O(N^2) reference computations used to check the fast kernels.

#include <cmath>
#include <complex>
#include <random>

#include "jrc/types.hpp"

namespace oracle {

using jrc::cdouble;
using jrc::CVec;

inline CVec dft(const CVec& x, std::size_t size) {
    CVec out(size);
    for (std::size_t k = 0; k < size; ++k) {
        cdouble acc{};
        for (std::size_t n = 0; n < x.size(); ++n)
            acc += x[n] * std::polar(1.0, -2.0 * jrc::kPi * static_cast<double>((k * n) % size) / size);
        out[k] = acc;
    }
    return out;
}

inline CVec correlate(const CVec& y, const CVec& x) {
    const std::size_t N = y.size();
    CVec out(N);
    for (std::size_t n = 0; n < N; ++n) {
        cdouble acc{};
        for (std::size_t i = 0; i < N; ++i) acc += y[i] * std::conj(x[(i + N - n) % N]);
        out[n] = acc;
    }
    return out;
}

inline CVec random_cvec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    CVec v(n);
    for (auto& s : v) s = {g(rng), g(rng)};
    return v;
}

inline double max_abs_diff(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const CVec& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

/// Q(x) Gaussian tail.
inline double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracle
