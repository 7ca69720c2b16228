#include <cmath>

#include "doctest.h"
#include "jrc/channel.hpp"
#include "jrc/dsp.hpp"
#include "jrc/waveforms/msqp.hpp"
#include "oracles.hpp"

using namespace jrc;

namespace {

ChannelConfig clean(double range, double vel = 0.0, cdouble gain = 1.0) {
    ChannelConfig c;
    c.carrier_hz = 3e11;
    c.sample_period_s = 1e-10;
    c.targets = {{range, vel, gain}};
    return c;
}

double range_for_delay(double samples, double Ts) { return samples * kSpeedOfLight * Ts / 2.0; }

ComplexSequence band_limited(std::size_t n, std::uint64_t seed) {
    const CVec r = oracle::random_cvec(n, seed);
    CVec X(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = (k < n / 2 ? double(k) : double(k) - double(n)) / double(n);
        if (std::abs(f) < 0.4) X[k] = r[k];
    }
    return idft({X, 1e10}, n);
}

}  // namespace

TEST_CASE("normalized_doppler") {
    CHECK(normalized_doppler(0.0, 3e11, 1e-10) == 0.0);
    CHECK(normalized_doppler(20.0, 3e11, 1e-10) == doctest::Approx(4.0028e-6).epsilon(1e-4));
    CHECK(normalized_doppler(-20.0, 3e11, 1e-10) < 0.0);
}

TEST_CASE("iq_coeffs") {
    auto c = iq_coeffs({});
    CHECK(c.mu == cdouble(1, 0));
    CHECK(std::abs(c.nu) == 0.0);
    const double ph = 10.0 * kPi / 180.0;
    c = iq_coeffs({0.2, ph, 0.0});
    CHECK(std::abs(c.mu - cdouble(std::cos(ph), 0.2 * std::sin(ph))) < 1e-15);
    CHECK(std::abs(c.nu - cdouble(0.2 * std::cos(ph), -std::sin(ph))) < 1e-15);
    c = iq_coeffs({1.0, 0.0, 0.0});
    CHECK(c.mu == cdouble(1, 0));
    CHECK(c.nu == cdouble(1, 0));
}

TEST_CASE("phase_noise_path") {
    ImpairmentConfig off;
    for (double v : phase_noise_path(100, off, 1)) CHECK(v == 0.0);
    ImpairmentConfig pn;
    pn.pn_sigma_rad = 0.3 * kPi / 180.0;
    pn.pn_initial = PhaseNoiseInit::uniform_random;
    const auto th = phase_noise_path(1000000, pn, 7);
    double s = 0.0;
    for (std::size_t n = 1; n < th.size(); ++n) s += (th[n] - th[n - 1]) * (th[n] - th[n - 1]);
    s /= double(th.size() - 1);
    CHECK(std::abs(s / (pn.pn_sigma_rad * pn.pn_sigma_rad) - 1.0) < 0.02);
    CHECK(th[0] >= 0.0);
    CHECK(th[0] < 2 * kPi);
    CHECK(phase_noise_path(1000, pn, 7) == std::vector<double>(th.begin(), th.begin() + 1000));
    CHECK_THROWS_AS(phase_noise_path(0, pn, 1), std::invalid_argument);
}

TEST_CASE("identity channel") {
    const ComplexSequence x{oracle::random_cvec(257, 1), 1e-10};
    const auto y = propagate(x, clean(0.0), 0, 1);
    CHECK(oracle::max_abs_diff(y.samples.samples, x.samples) < 1e-12);
    CHECK(y.wrapped_targets.empty());
}

TEST_CASE("integer delay is a cyclic shift scaled by the gain") {
    const ComplexSequence x{oracle::random_cvec(300, 2), 1e-10};
    const cdouble h = std::polar(0.3, 1.1);
    const auto y = propagate(x, clean(range_for_delay(17, 1e-10), 0.0, h), 0, 1);
    for (std::size_t n = 0; n < 300; ++n) CHECK(std::abs(y.samples[(n + 17) % 300] - h * x[n]) < 1e-9);
    auto c = clean(range_for_delay(17, 1e-10), 0.0, h);
    c.upsample_factor = 1;
    const auto y1 = propagate(x, c, 0, 1);
    for (std::size_t n = 0; n < 300; ++n) CHECK(std::abs(y1.samples[(n + 17) % 300] - h * x[n]) < 1e-12);
}

TEST_CASE("Doppler rotation and block phase progression") {
    const MsQpSpec s = make_uniform_msqp(4, 101, 5);
    const auto x = msqp_build(s);
    const double v = normalized_doppler(20.0, 3e11, 1e-10);
    const std::size_t N = x.size();
    for (long long q : {0LL, 3LL}) {
        const auto y = propagate(x, clean(0.0, 20.0), q, 1);
        for (std::size_t n : {0u, 1u, 100u, 400u}) {
            const cdouble want = x[n] * std::polar(1.0, 2 * kPi * (double(n) + double(q) * double(N)) * v);
            CHECK(std::abs(y.samples[n] - want) < 1e-12);
        }
        const CVec r0 = cyclic_correlate(y.samples, x).samples;
        std::size_t peak = 0;
        for (std::size_t n = 1; n < N; ++n)
            if (std::abs(r0[n]) > std::abs(r0[peak])) peak = n;
        CHECK(peak == 0);
    }
}

TEST_CASE("channel is linear in targets") {
    const ComplexSequence x{oracle::random_cvec(200, 3), 1e-10};
    ChannelConfig a = clean(0.13, 5.0, {0.5, 0.1});
    ChannelConfig b = clean(0.71, -12.0, {-0.2, 0.4});
    ChannelConfig ab = a;
    ab.targets.push_back(b.targets[0]);
    const auto ya = propagate(x, a, 2, 1), yb = propagate(x, b, 2, 1), yab = propagate(x, ab, 2, 1);
    CVec sum(200);
    for (std::size_t n = 0; n < 200; ++n) sum[n] = ya.samples[n] + yb.samples[n];
    CHECK(oracle::max_abs_diff(sum, yab.samples.samples) < 1e-9);
}

TEST_CASE("fractional delay preserves energy of band-limited input") {
    const auto x = band_limited(1024, 5);
    for (double d : {0.25, 3.5, 10.75}) {
        const auto y = propagate(x, clean(range_for_delay(d, 1e-10)), 0, 1);
        CHECK(std::abs(10 * std::log10(energy(y.samples.samples) / energy(x.samples))) < 0.1);
    }
}

TEST_CASE("image power ratio follows the I/Q coefficients") {
    const std::size_t N = 256;
    CVec tone(N);
    for (std::size_t n = 0; n < N; ++n) tone[n] = std::polar(1.0, 2 * kPi * 9.0 * double(n) / double(N));
    ChannelConfig c = clean(0.0);
    c.impairments.iq_amp = 0.2;
    c.impairments.iq_phase_rad = 10.0 * kPi / 180.0;
    const auto y = propagate({tone, 1e-10}, c, 0, 1);
    const auto Y = dft(y.samples, N);
    const auto iq = iq_coeffs(c.impairments);
    const double measured = std::norm(Y[N - 9]) / std::norm(Y[9]);
    const double expect = std::norm(iq.nu) / std::norm(iq.mu);
    CHECK(std::abs(measured / expect - 1.0) < 0.05);
}

TEST_CASE("shared LO phase noise cancels at zero delay") {
    const ComplexSequence x{oracle::random_cvec(500, 6), 1e-10};
    ChannelConfig c = clean(0.0);
    c.impairments.pn_sigma_rad = 0.05;
    c.impairments.pn_initial = PhaseNoiseInit::uniform_random;
    const auto y = propagate(x, c, 0, 3);
    CHECK(oracle::max_abs_diff(y.samples.samples, x.samples) < 1e-12);
    // a delayed target picks up the phase difference
    const auto yd = propagate(x, clean(range_for_delay(20, 1e-10)), 0, 3);
    ChannelConfig cd = c;
    cd.targets[0].range_m = range_for_delay(20, 1e-10);
    const auto ypn = propagate(x, cd, 0, 3);
    CHECK(oracle::max_abs_diff(yd.samples.samples, ypn.samples.samples) > 1e-3);
}

TEST_CASE("noise is referenced to the echo power and deterministic") {
    const ComplexSequence x{oracle::random_cvec(4096, 7), 1e-10};
    ChannelConfig c = clean(0.0, 0.0, {0.1, 0.0});
    c.snr_db = -10.0;
    const EchoSynthesizer syn(x, c);
    CHECK(syn.noise_variance() == doctest::Approx(0.01 * mean_power(x.samples) * 10.0).epsilon(1e-12));
    const auto a = syn.block(0, 9), b = syn.block(0, 9), d = syn.block(0, 10);
    CHECK(a.samples.samples == b.samples.samples);
    CHECK(a.samples.samples != d.samples.samples);
    double p = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) p += std::norm(a.samples[n] - 0.1 * x[n]);
    CHECK(p / double(x.size()) == doctest::Approx(syn.noise_variance()).epsilon(0.05));
}

TEST_CASE("delays past one block are flagged") {
    const ComplexSequence x{oracle::random_cvec(64, 8), 1e-10};
    const auto y = propagate(x, clean(range_for_delay(70, 1e-10)), 0, 1);
    CHECK(y.wrapped_targets == std::vector<std::size_t>{0});
}

TEST_CASE("channel config validation") {
    ChannelConfig c = clean(1.0);
    c.upsample_factor = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = clean(-1.0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = clean(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = clean(1.0);
    c.impairments.pn_sigma_rad = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
