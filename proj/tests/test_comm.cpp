#include <cmath>

#include "doctest.h"
#include "jrc/comm.hpp"
#include "jrc/dsp.hpp"
#include "jrc/fft.hpp"
#include "jrc/rng.hpp"
#include "oracles.hpp"

using namespace jrc;

namespace {

DeMsQpSpec make_spec(int M, long long L, long long LG, int Mp, long long cp = 0) {
    DeMsQpSpec d;
    d.base = make_uniform_msqp(M, L, LG);
    d.extension = Mp;
    d.guard_len_ext = LG * Mp;
    d.cp_len = cp;
    return d;
}

ChannelEstimate unit_gains(const DeMsQpSpec& d) {
    ChannelEstimate g;
    for (std::size_t m = 0; m < d.base.num_subbands(); ++m) g.gains.emplace_back(static_cast<std::size_t>(d.ext_subband_len(m)), 1.0);
    return g;
}

struct Rx {
    StreamGrid grid;
    ChannelEstimate est;
    Demodulated dem;
};

Rx receive(const ComplexSequence& frame, const DeMsQpSpec& d, const EqualizerOptions& opt = {}) {
    Rx r;
    r.grid = extract_streams(strip_cp(frame, d), d);
    r.est = channel_estimate(r.grid, d);
    r.dem = equalize_and_demap(r.grid, r.est, d, opt);
    return r;
}

}  // namespace

TEST_CASE("noiseless loopback recovers every symbol") {
    for (int Mp : {1, 2, 3, 4}) {
        for (int M : {1, 3}) {
            auto d = make_spec(M, 31, 2, Mp, 7);
            d.base.chosen_phases = std::vector<double>(static_cast<std::size_t>(M), kPi / 2);
            (*d.base.chosen_phases)[0] = 0.0;
            const auto pay = random_payload(d, 100 + Mp);
            const auto frame = de_msqp_build(d, pay.symbols);
            const auto r = receive(frame, d);
            CAPTURE(Mp);
            CAPTURE(M);
            for (std::size_t m = 0; m < d.base.num_subbands(); ++m) {
                const CVec comb = de_msqp_comb(d, m);
                CHECK(oracle::max_abs_diff(r.grid.bins[m][0], comb) < 1e-9);
            }
            REQUIRE(r.dem.symbols.size() == pay.symbols.size());
            for (std::size_t s = 0; s < pay.symbols.size(); ++s) CHECK(oracle::max_abs_diff(r.dem.symbols[s], pay.symbols[s]) < 1e-9);
            CHECK(ber_count(pay.bits, r.dem.bits).bits_errored == 0);
        }
    }
}

TEST_CASE("zeroed data streams extract as zero") {
    const auto d = make_spec(2, 23, 3, 3);
    const auto pay = random_payload(d, 1);
    DeMsQpBuildOptions opt;
    opt.data_gain = 0.0;
    const auto frame = de_msqp_build(d, pay.symbols, opt);
    const auto g = extract_streams(frame, d);
    double comb = 0.0;
    for (std::size_t m = 0; m < 2; ++m) {
        comb += energy(g.bins[m][0]);
        for (int i = 1; i < 3; ++i) CHECK(oracle::max_abs(g.bins[m][static_cast<std::size_t>(i)]) < 1e-12);
    }
    CHECK(comb > 1.0);
}

TEST_CASE("stream energies partition the subband energy") {
    const auto d = make_spec(3, 17, 2, 4);
    const CVec y = oracle::random_cvec(static_cast<std::size_t>(d.frame_len()), 8);
    const auto g = extract_streams({y, 1e-10}, d);
    const CVec Y = fft::forward(y);
    const double scale = 1.0 / (double(d.frame_len()) * std::pow(de_msqp_frame_scale(d), 2));
    const auto f = d.ext_offsets();
    for (std::size_t m = 0; m < 3; ++m) {
        double streams = 0.0;
        for (const auto& s : g.bins[m]) streams += energy(s);
        const double band = energy(std::span<const cdouble>(Y).subspan(static_cast<std::size_t>(f[m]), static_cast<std::size_t>(d.ext_subband_len(m)))) * scale;
        CHECK(streams == doctest::Approx(band).epsilon(1e-12));
    }
    CHECK_THROWS_AS(extract_streams({CVec(y.size() + 1), 1e-10}, d), std::invalid_argument);
}

TEST_CASE("flat channel estimate") {
    const auto d = make_spec(3, 29, 2, 3, 5);
    const auto pay = random_payload(d, 4);
    auto frame = de_msqp_build(d, pay.symbols);
    for (const cdouble h : {cdouble(1.0, 0.0), std::polar(0.5, kPi / 4)}) {
        ComplexSequence f = frame;
        for (auto& v : f.samples) v *= h;
        const auto r = receive(f, d);
        for (const auto& gm : r.est.gains)
            for (const auto& g : gm) CHECK(std::abs(g - h) < 1e-9);
        CHECK(ber_count(pay.bits, r.dem.bits).bits_errored == 0);
    }
}

TEST_CASE("estimate error variance tracks the noise-to-signal ratio at 20 dB") {
    const auto d = make_spec(4, 101, 4, 2);
    const auto pay = random_payload(d, 9);
    const auto frame = de_msqp_build(d, pay.symbols);
    const double nsr = 0.01;
    double err = 0.0;
    std::size_t count = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        ComplexSequence f = frame;
        add_noise(f.samples, mean_power(f.view()) * nsr, derive_seed(77, {t}));
        const auto g = extract_streams(f, d);
        const auto est = channel_estimate(g, d);
        for (const auto& gm : est.gains)
            for (std::size_t k = 0; k < gm.size(); k += 2, ++count) err += std::norm(gm[k] - 1.0);
    }
    const double var = err / double(count);
    CHECK(var > nsr / 2);
    CHECK(var < nsr * 2);
}

TEST_CASE("a corrupted bin only degrades its own stream") {
    const auto d = make_spec(3, 31, 2, 4);
    const auto pay = random_payload(d, 5);
    const auto frame = de_msqp_build(d, pay.symbols);
    auto grid = extract_streams(frame, d);
    const std::size_t tm = 1;
    const int ti = 2;
    grid.bins[tm][static_cast<std::size_t>(ti)][7] += cdouble(3.0, -2.0);
    const auto dem = equalize_and_demap(grid, unit_gains(d), d);
    for (std::size_t m = 0; m < 3; ++m) {
        for (int i = 1; i < 4; ++i) {
            const std::size_t s = d.data_index(m, i);
            const double diff = oracle::max_abs_diff(dem.symbols[s], pay.symbols[s]);
            if (m == tm && i == ti)
                CHECK(diff > 0.1);
            else
                CHECK(diff < 1e-9);
        }
    }
}

TEST_CASE("phase ramp is required for streams above zero") {
    const auto d = make_spec(2, 101, 3, 2);
    const auto pay = random_payload(d, 6);
    const auto frame = de_msqp_build(d, pay.symbols);
    EqualizerOptions off;
    off.phase_ramp = false;
    const auto good = receive(frame, d);
    const auto bad = receive(frame, d, off);
    CHECK(ber_count(pay.bits, good.dem.bits).bits_errored == 0);
    CHECK(ber_count(pay.bits, bad.dem.bits).bits_errored > 0);
    // the omission is a pure rotation by exp(-j 2 pi n / L')
    const auto& s = bad.dem.symbols[0];
    for (std::size_t n = 0; n < s.size(); ++n)
        CHECK(std::abs(s[n] - pay.symbols[0][n] * std::polar(1.0, -2 * kPi * double(n) / 202.0)) < 1e-9);
}

TEST_CASE("QPSK BER on a flat AWGN channel follows the Gaussian tail") {
    const auto d = make_spec(4, 1007, 10, 8);
    for (double ebn0_db : {4.0, 7.0, 10.0}) {
        const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
        const double theory = oracle::qfunc(std::sqrt(2 * ebn0));
        const double sigma2 = 1.0 / (2 * ebn0);
        std::uint64_t bits = 0, errs = 0;
        for (std::uint64_t t = 0; errs < 100 && bits < 60000000ull; ++t) {
            const auto pay = random_payload(d, derive_seed(31, {t}));
            auto frame = de_msqp_build(d, pay.symbols);
            add_noise(frame.samples, sigma2, derive_seed(32, {t}));
            const auto grid = extract_streams(frame, d);
            const auto dem = equalize_and_demap(grid, unit_gains(d), d);
            const auto rep = ber_count(pay.bits, dem.bits);
            bits += rep.bits_total;
            errs += rep.bits_errored;
        }
        CAPTURE(ebn0_db);
        CAPTURE(bits);
        CHECK(errs >= 100);
        const double ber = double(errs) / double(bits);
        CHECK(ber < 3 * theory);
        CHECK(ber > theory / 3);
    }
}

TEST_CASE("ber_count") {
    std::vector<std::uint8_t> a(10000, 0), b(10000, 0);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = b[i] = static_cast<std::uint8_t>(i % 3 == 0);
    CHECK(ber_count(a, b).ber == 0.0);
    b[4321] ^= 1;
    const auto r = ber_count(a, b);
    CHECK(r.bits_errored == 1);
    CHECK(r.ber == doctest::Approx(1e-4));
    for (auto& v : b) v = static_cast<std::uint8_t>(1 - v);
    b[4321] ^= 1;
    CHECK(ber_count(a, b).ber == 1.0);
    b.pop_back();
    CHECK_THROWS_AS(ber_count(a, b), std::invalid_argument);
}
