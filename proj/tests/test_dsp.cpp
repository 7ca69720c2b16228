#include <cmath>
#include <limits>

#include "doctest.h"
#include "jrc/dsp.hpp"
#include "jrc/waveforms/zc.hpp"
#include "oracles.hpp"

using namespace jrc;

namespace {
ComplexSequence seq(CVec v) { return {std::move(v), 1.0}; }
}  // namespace

TEST_CASE("dft of an impulse is flat") {
    const auto X = dft(seq({1, 0, 0, 0}), 4);
    for (const auto& b : X.bins) CHECK(std::abs(b - cdouble(1, 0)) < 1e-12);
}

TEST_CASE("dft of [1,1,-1,-1]") {
    const auto X = dft(seq({1, 1, -1, -1}), 4);
    const CVec expect{{0, 0}, {2, -2}, {0, 0}, {2, 2}};
    CHECK(oracle::max_abs_diff(X.bins, expect) < 1e-12);
}

TEST_CASE("dft zero-pads and matches the direct sum") {
    const CVec x = oracle::random_cvec(37, 1);
    const auto X = dft(seq(x), 60);
    CHECK(oracle::max_abs_diff(X.bins, oracle::dft(x, 60)) < 1e-9);
    CHECK_THROWS_AS(dft(seq(x), 0), std::invalid_argument);
    CHECK_THROWS_AS(dft(seq(x), 10), std::invalid_argument);
}

TEST_CASE("prime and mixed-radix sizes match the direct dft") {
    for (std::size_t n : {7u, 11u, 101u, 251u, 1007u}) {
        const CVec x = oracle::random_cvec(n, n);
        const auto X = dft(seq(x), n);
        CHECK(oracle::max_abs_diff(X.bins, oracle::dft(x, n)) < 1e-9 * std::sqrt(double(n)) * oracle::max_abs(X.bins));
    }
}

TEST_CASE("idft examples and round trips") {
    Spectrum flat{{1, 1, 1, 1}, 1.0};
    const auto x = idft(flat, 4);
    CHECK(oracle::max_abs_diff(x.samples, CVec{1, 0, 0, 0}) < 1e-12);
    Spectrum zeros{CVec(8), 1.0};
    CHECK(oracle::max_abs(idft(zeros, 8).samples) == 0.0);
    CHECK_THROWS_AS(idft(zeros, 0), std::invalid_argument);
    for (std::size_t n : {64u, 101u}) {
        const CVec v = oracle::random_cvec(n, 7 + n);
        const auto back = idft(dft(seq(v), n), n);
        CHECK(oracle::max_abs_diff(back.samples, v) < 1e-12 * oracle::max_abs(v) * 10);
    }
}

TEST_CASE("Parseval") {
    for (std::size_t n : {7u, 64u, 1007u}) {
        const CVec v = oracle::random_cvec(n, 100 + n);
        const auto X = dft(seq(v), n);
        CHECK(std::abs(energy(X.bins) / double(n) - energy(v)) / energy(v) < 1e-9);
    }
}

TEST_CASE("cyclic correlation of a ZC sequence is an impulse") {
    const auto b = zc_generate({5, 1});
    const auto r = cyclic_correlate(b, b);
    CHECK(std::abs(r[0] - cdouble(5, 0)) < 1e-9);
    for (std::size_t n = 1; n < 5; ++n) CHECK(std::abs(r[n]) < 1e-9);
}

TEST_CASE("cyclic correlation locates a shift") {
    const CVec x = oracle::random_cvec(64, 3);
    CVec y(64);
    for (std::size_t i = 0; i < 64; ++i) y[(i + 3) % 64] = x[i];
    const auto r = cyclic_correlate(seq(y), seq(x));
    std::size_t best = 0;
    for (std::size_t n = 1; n < 64; ++n)
        if (std::abs(r[n]) > std::abs(r[best])) best = n;
    CHECK(best == 3);
}

TEST_CASE("transform correlation equals the direct double loop") {
    for (std::size_t n = 1; n <= 256; n += 17) {
        const CVec x = oracle::random_cvec(n, 2 * n), y = oracle::random_cvec(n, 2 * n + 1);
        const CVec fast = cyclic_correlate(seq(y), seq(x)).samples;
        const CVec ref = oracle::correlate(y, x);
        CHECK(oracle::max_abs_diff(fast, ref) <= 1e-9 * oracle::max_abs(ref));
    }
    CHECK_THROWS_AS(cyclic_correlate(seq(CVec(4)), seq(CVec(5))), std::invalid_argument);
}

TEST_CASE("autocorrelation at lag zero is the energy") {
    const CVec x = oracle::random_cvec(200, 9);
    const auto r = cyclic_correlate(seq(x), seq(x));
    CHECK(std::abs(r[0].real() - energy(x)) / energy(x) < 1e-9);
}

TEST_CASE("upsample_filter") {
    const CVec x = oracle::random_cvec(20, 4);
    const auto same = upsample_filter(seq(x), 1);
    CHECK(same.samples == x);
    CHECK_THROWS_AS(upsample_filter(seq(x), 0), std::invalid_argument);

    const auto dc = upsample_filter(seq(CVec(64, cdouble(1, 0))), 4);
    CHECK(dc.size() == 256);
    for (std::size_t n = 64; n < 192; ++n) CHECK(std::abs(dc[n] - cdouble(1, 0)) < 0.01);

    // original grid reproduced
    const auto up = upsample_filter(seq(x), 4);
    for (std::size_t n = 0; n < x.size(); ++n) CHECK(std::abs(up[4 * n] - x[n]) < 1e-12);
}

TEST_CASE("tone survives upsample and downsample") {
    const std::size_t n = 256;
    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::polar(1.0, 2.0 * kPi * 0.1 * double(i));
    const auto up = upsample_filter(seq(x), 4, Boundary::cyclic);
    // off-grid samples must follow the tone too
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < up.size(); ++i) {
        const cdouble want = std::polar(1.0, 2.0 * kPi * 0.1 * double(i) / 4.0);
        err += std::norm(up[i] - want);
        ref += 1.0;
    }
    // cyclic wrap of a non-periodic tone breaks the edges; 0.1 * 256 = 25.6 cycles
    CHECK(10 * std::log10(err / ref) < -20.0);
    const auto back = downsample(up, 4, 0);
    double e2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) e2 += std::norm(back[i] - x[i]);
    CHECK(10 * std::log10(e2 / double(n)) < -40.0);
}

TEST_CASE("periodic tone interpolates to -40 dB") {
    const std::size_t n = 250;
    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::polar(1.0, 2.0 * kPi * 25.0 * double(i) / double(n));
    const auto up = upsample_filter(seq(x), 4, Boundary::cyclic);
    double err = 0.0;
    for (std::size_t i = 0; i < up.size(); ++i)
        err += std::norm(up[i] - std::polar(1.0, 2.0 * kPi * 25.0 * double(i) / double(4 * n)));
    CHECK(10 * std::log10(err / double(up.size())) < -40.0);
}

TEST_CASE("downsample index arithmetic") {
    const auto y = downsample(seq({0, 1, 2, 3, 4, 5}), 2, 1);
    CHECK(y.samples == CVec{1, 3, 5});
    const CVec x = oracle::random_cvec(9, 1);
    CHECK(downsample(seq(x), 1, 0).samples == x);
    CHECK_THROWS_AS(downsample(seq(x), 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(downsample(seq(x), 2, -1), std::invalid_argument);
}

TEST_CASE("band-limited round trip through the interpolator") {
    // energy confined to |f| < 0.4 of the input rate
    const std::size_t n = 512;
    CVec X(n);
    const CVec r = oracle::random_cvec(n, 11);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = (k < n / 2 ? double(k) : double(k) - n) / n;
        if (std::abs(f) < 0.4) X[k] = r[k];
    }
    const auto x = idft({X, 1.0}, n);
    const auto back = downsample(upsample_filter(x, 4, Boundary::cyclic), 4, 0);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += std::norm(back[i] - x[i]);
    CHECK(10 * std::log10(e / energy(x.samples)) < -35.0);
    // energy preserved at the high rate within 0.1 dB
    const auto up = upsample_filter(x, 4, Boundary::cyclic);
    CHECK(std::abs(10 * std::log10(energy(up.samples) / (4.0 * energy(x.samples)))) < 0.1);
}

TEST_CASE("delay_cyclic matches the direct zero-stuffed sum") {
    const CVec x = oracle::random_cvec(300, 21);
    for (int F : {1, 2, 4}) {
        const InterpolationKernel k(F);
        for (long long d : {0LL, 1LL, 3LL, 17LL, 1199LL, -5LL, 2000LL}) {
            const CVec a = delay_cyclic(x, d, k);
            const CVec b = serial::delay_cyclic(x, d, k);
            CHECK(oracle::max_abs_diff(a, b) < 1e-12 * oracle::max_abs(b) * 100);
        }
    }
    // integer delay at the base rate is a pure cyclic shift
    const CVec y = delay_cyclic(x, 12, InterpolationKernel(4));
    for (std::size_t n = 0; n < 300; ++n) CHECK(std::abs(y[(n + 3) % 300] - x[n]) < 1e-12);
}

TEST_CASE("papr_db") {
    CHECK(std::abs(papr_db(zc_generate({1007, 503}))) < 1e-9);
    CHECK(std::abs(papr_db(seq({2, 0, 0, 0})) - 10 * std::log10(4.0)) < 1e-12);
    CHECK_THROWS_AS(papr_db(seq(CVec(4))), std::invalid_argument);
    const CVec x = oracle::random_cvec(100, 5);
    CVec y = x;
    for (auto& v : y) v *= cdouble(-3.0, 2.0);
    CHECK(std::abs(papr_db(seq(x)) - papr_db(seq(y))) < 1e-9);
}

TEST_CASE("awgn") {
    const CVec x(1000000, cdouble(1, 0));
    const auto clean = awgn(seq(x), std::numeric_limits<double>::infinity(), 1);
    CHECK(clean.samples == x);
    const auto noisy = awgn(seq(x), 0.0, 42);
    double p = 0.0, pr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cdouble w = noisy[i] - x[i];
        p += std::norm(w);
        pr += w.real() * w.real();
    }
    p /= double(x.size());
    pr /= double(x.size());
    CHECK(std::abs(p - 1.0) < 0.01);
    CHECK(std::abs(pr - 0.5) < 0.01);
    CHECK(awgn(seq(x), 0.0, 42).samples == noisy.samples);
    CHECK(awgn(seq(x), 0.0, 43).samples != noisy.samples);
}
