#include <cmath>
#include <random>

#include "doctest.h"
#include "jrc/channel.hpp"
#include "jrc/dsp.hpp"
#include "jrc/radar.hpp"
#include "jrc/waveforms/de_msqp.hpp"
#include "jrc/waveforms/msqp.hpp"
#include "oracles.hpp"

using namespace jrc;

namespace {

RdmGeometry geom(double Ts = 1e-10) {
    RdmGeometry g;
    g.sample_period_s = Ts;
    g.carrier_hz = 3e11;
    return g;
}

double rel_err_db(const CVec& a, const CVec& ref) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e += std::norm(a[i] - ref[i]);
    return 10 * std::log10(e / energy(ref));
}

Matrix<double> flat_power(std::size_t N, std::size_t K, double v) { return Matrix<double>(N, K, v); }

}  // namespace

TEST_CASE("subband_receive reconstructs an msqp") {
    const MsQpSpec s = make_uniform_msqp(5, 101, 7);
    const auto x = msqp_build(s);
    CVec two(x.samples);
    two.insert(two.end(), x.samples.begin(), x.samples.end());
    const auto y = subband_receive({two, x.sample_period_s}, s);
    CHECK(rel_err_db(y.samples, two) < -60.0);
    CHECK_THROWS_AS(subband_receive({CVec(x.size() + 1, 1.0), 1e-10}, s), std::invalid_argument);
    // low-rate samples of one band are the band's ZC times the band scale
    const auto low = subband_sample(x.samples, s);
    REQUIRE(low.size() == 5);
    const auto b = zc_generate(s.subbands[2]);
    const double scale = std::sqrt(101.0 / double(s.total_len()));
    CHECK(oracle::max_abs_diff(low[2], [&] {
              CVec v(b.samples);
              for (auto& e : v) e *= scale;
              return v;
          }()) < 1e-12);
}

TEST_CASE("subband_receive discards guard bins") {
    const MsQpSpec s = make_uniform_msqp(3, 11, 4);
    const std::size_t N = static_cast<std::size_t>(s.total_len());
    CVec X(N);
    X[11] = 1.0;
    X[12] = cdouble(0, 2);
    X[N - 1] = 3.0;
    const auto x = idft({X, 1.0}, N);
    const auto y = subband_receive({x.samples, 1.0}, s);
    CHECK(oracle::max_abs(y.samples) < 1e-14);
}

TEST_CASE("subband_receive with one band and no guard is all-pass") {
    const MsQpSpec s = make_uniform_msqp(1, 63, 0);
    const CVec r = oracle::random_cvec(63 * 2, 4);
    const auto y = subband_receive({r, 1.0}, s);
    CHECK(oracle::max_abs_diff(y.samples, r) < 1e-12);
}

TEST_CASE("correlate_subblocks") {
    const MsQpSpec s = make_uniform_msqp(3, 31, 2);
    const auto x = msqp_build(s);
    const std::size_t N = x.size();
    SubblockSet set;
    set.blocks.assign(4, x.samples);
    const auto c = correlate_subblocks(set, x.samples);
    for (std::size_t q = 0; q < 4; ++q) CHECK(std::abs(c(0, q) - energy(x.samples)) < 1e-9);
    // shifted and Doppler-rotated blocks
    const double v = 0.002;
    for (std::size_t q = 0; q < 4; ++q) {
        CVec y(N);
        for (std::size_t n = 0; n < N; ++n) y[(n + 5) % N] = x[n];
        for (std::size_t n = 0; n < N; ++n) y[n] *= std::polar(1.0, 2 * kPi * (double(n) + double(q * N)) * v);
        set.blocks[q] = y;
    }
    const auto c2 = correlate_subblocks(set, x.samples);
    for (std::size_t q = 0; q < 4; ++q) {
        std::size_t best = 0;
        for (std::size_t n = 1; n < N; ++n)
            if (std::abs(c2(n, q)) > std::abs(c2(best, q))) best = n;
        CHECK(best == 5);
    }
    for (std::size_t q = 1; q < 4; ++q) {
        const cdouble ratio = c2(5, q) / c2(5, q - 1);
        CHECK(std::abs(ratio - std::polar(1.0, 2 * kPi * double(N) * v)) < 1e-9);
    }
    const auto ref = serial::correlate_subblocks(set, x.samples);
    CHECK(oracle::max_abs_diff(CVec(c2.data().begin(), c2.data().end()), CVec(ref.data().begin(), ref.data().end())) < 1e-9);
    CHECK_THROWS_AS(correlate_subblocks(set, CVec(N - 1)), std::invalid_argument);
}

TEST_CASE("rdm") {
    const std::size_t N = 6, Q = 8;
    Matrix<cdouble> corr(N, Q);
    for (std::size_t q = 0; q < Q; ++q) {
        corr(0, q) = 2.0;
        corr(1, q) = std::polar(1.0, 2 * kPi * double(q) * 3.0 / double(Q));
    }
    for (int w : {1, 4}) {
        const auto map = rdm(corr, w, geom());
        CHECK(map.Q0() == Q * w);
        CHECK(std::abs(map.cells(0, 0)) == doctest::Approx(16.0));
        for (std::size_t k = 1; k < map.Q0(); ++k) CHECK(std::abs(map.cells(0, k)) < std::abs(map.cells(0, 0)));
        std::size_t best = 0;
        for (std::size_t k = 1; k < map.Q0(); ++k)
            if (std::abs(map.cells(1, k)) > std::abs(map.cells(1, best))) best = k;
        CHECK(best == 3 * static_cast<std::size_t>(w));
    }
    const CVec r = oracle::random_cvec(N * Q, 3);
    Matrix<cdouble> rc(N, Q);
    std::copy(r.begin(), r.end(), rc.data().begin());
    const auto m1 = rdm(rc, 1, geom()), m4 = rdm(rc, 4, geom());
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < Q; ++k) CHECK(std::abs(m1.cells(n, k) - m4.cells(n, 4 * k)) < 1e-12);
    const auto s4 = serial::rdm(rc, 4, geom());
    CHECK(oracle::max_abs_diff(CVec(m4.cells.data().begin(), m4.cells.data().end()),
                               CVec(s4.cells.data().begin(), s4.cells.data().end())) < 1e-12);
}

TEST_CASE("cfar_floor") {
    CfarConfig cfg;
    cfg.train_cells = 4;
    cfg.guard_cells = 1;
    const auto fl = cfar_floor(flat_power(20, 3, 2.5), cfg);
    for (double v : fl.data()) CHECK(v == doctest::Approx(2.5));
    auto p = flat_power(20, 3, 1.0);
    p(7, 1) = 1000.0;
    const auto f2 = cfar_floor(p, cfg);
    CHECK(f2(7, 1) == doctest::Approx(1.0));
    CHECK(f2(9, 1) == doctest::Approx((7.0 + 1000.0) / 8.0));
    CHECK(f2(12, 1) == doctest::Approx((7.0 + 1000.0) / 8.0));
    CHECK(f2(13, 1) == doctest::Approx(1.0));
    // cyclic wrap: spike at row 0 seen by row 18
    auto p3 = flat_power(20, 2, 0.0);
    p3(0, 0) = 8.0;
    CHECK(cfar_floor(p3, cfg)(18, 0) == doctest::Approx(1.0));
    cfg.train_cells = 10;
    CHECK_THROWS_AS(cfar_floor(p3, cfg), std::invalid_argument);
}

TEST_CASE("cfar floor is unbiased on complex Gaussian maps") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5 * 3.0));
    Matrix<double> p(500, 40);
    for (auto& v : p.data()) {
        const double a = g(rng), b = g(rng);
        v = a * a + b * b;
    }
    const CfarConfig cfg;
    const auto fl = cfar_floor(p, cfg);
    double mean = 0.0;
    for (double v : fl.data()) mean += v;
    mean /= double(fl.data().size());
    CHECK(mean / 3.0 > 0.98);
    CHECK(mean / 3.0 < 1.02);
    const auto sf = serial::cfar_floor(p, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < sf.data().size(); ++i) worst = std::max(worst, std::abs(sf.data()[i] - fl.data()[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("temp_detect") {
    CfarConfig cfg;
    cfg.threshold = std::pow(10.0, 1.3);
    cfg.train_cells = 8;
    cfg.guard_cells = 2;
    cfg.temp_radius = 40;
    RdmGeometry g = geom();
    g.N = 200;
    g.Q0 = 16;
    auto p = flat_power(200, 16, 1.0);
    p(50, 3) = 100.0;
    auto rep = temp_detect(p, cfar_floor(p, cfg), cfg, g);
    REQUIRE(rep.detections.size() == 1);
    CHECK(rep.detections[0].range_bin == 50);
    CHECK(rep.detections[0].doppler_bin == 3);
    CHECK(rep.detections[0].range_m == doctest::Approx(estimate_range(50, 1e-10)));

    p(53, 5) = 80.0;
    rep = temp_detect(p, cfar_floor(p, cfg), cfg, g);
    REQUIRE(rep.detections.size() == 1);
    CHECK(rep.detections[0].range_bin == 50);

    // far enough apart: both reported, stronger first; window wraps cyclically
    p(53, 5) = 1.0;
    p(195, 2) = 90.0;
    p(20, 2) = 95.0;
    rep = temp_detect(p, cfar_floor(p, cfg), cfg, g);
    REQUIRE(rep.detections.size() == 2);
    CHECK(rep.detections[0].range_bin == 50);
    CHECK(rep.detections[1].range_bin == 195);

    const auto quiet = flat_power(200, 16, 1.0);
    rep = temp_detect(quiet, cfar_floor(quiet, cfg), cfg, g);
    CHECK(rep.detections.empty());
    CHECK(rep.peak.range_bin == 0);
    CHECK(rep.peak.doppler_bin == 0);
}

TEST_CASE("raising the threshold never adds detections") {
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> e(1.0);
    Matrix<double> p(300, 8);
    for (auto& v : p.data()) v = e(rng);
    p(100, 2) = 200.0;
    p(10, 1) = 40.0;
    CfarConfig cfg;
    cfg.temp_radius = 5;
    RdmGeometry g = geom();
    g.N = 300;
    g.Q0 = 8;
    std::size_t prev = 1u << 30;
    for (double db = 0.0; db <= 25.0; db += 1.0) {
        cfg.threshold = std::pow(10.0, db / 10.0);
        const auto rep = temp_detect(p, cfar_floor(p, cfg), cfg, g);
        CHECK(rep.detections.size() <= prev);
        prev = rep.detections.size();
    }
}

TEST_CASE("estimators") {
    CHECK(estimate_range(0, 1e-10) == 0.0);
    CHECK(estimate_range(100, 1e-10) == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(estimate_range(20, 1e-9) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(estimate_velocity(0, 1024, 11077, 3e11, 1e-10) == 0.0);
    const double bin = estimate_velocity(1, 1024, 11077, 3e11, 1e-10);
    CHECK(bin == doctest::Approx(0.441).epsilon(2e-3));
    CHECK(estimate_velocity(1023, 1024, 11077, 3e11, 1e-10) == doctest::Approx(-bin));
    CHECK(estimate_velocity(512, 1024, 11077, 3e11, 1e-10) == doctest::Approx(-512 * bin));
    CHECK(estimate_velocity(511, 1024, 11077, 3e11, 1e-10) == doctest::Approx(511 * bin));
    CHECK_THROWS_AS(estimate_velocity(1024, 1024, 11077, 3e11, 1e-10), std::invalid_argument);
}

TEST_CASE("de_msqp_split") {
    DeMsQpSpec d;
    d.base = make_uniform_msqp(3, 31, 2);
    d.extension = 1;
    d.guard_len_ext = 2;
    const auto f1 = de_msqp_build(d, {});
    const auto s1 = de_msqp_split(f1, d);
    REQUIRE(s1.Q() == 1);
    CHECK(s1.blocks[0] == f1.samples);

    d.extension = 3;
    d.guard_len_ext = 6;
    d.cp_len = 9;
    const auto pay = random_payload(d, 2);
    const auto f = de_msqp_build(d, pay.symbols);
    const auto s = de_msqp_split(f, d);
    REQUIRE(s.Q() == 3);
    CVec cat;
    for (const auto& b : s.blocks) cat.insert(cat.end(), b.begin(), b.end());
    CHECK(cat == CVec(f.samples.begin() + 9, f.samples.end()));
    const auto x = msqp_build(d.base);
    const auto c = correlate_subblocks(s, x.samples);
    for (std::size_t q = 0; q < 3; ++q) {
        std::size_t best = 0;
        for (std::size_t n = 1; n < c.rows(); ++n)
            if (std::abs(c(n, q)) > std::abs(c(best, q))) best = n;
        CHECK(best == 0);
    }
    CHECK_THROWS_AS(de_msqp_split({CVec(10), 1e-10}, d), std::invalid_argument);
}

TEST_CASE("noiseless single target is detected at its exact bins") {
    const MsQpSpec s = make_uniform_msqp(4, 101, 5);
    const auto x = msqp_build(s);
    const std::size_t N = x.size();
    const long long tau = 37;
    ChannelConfig ch;
    ch.sample_period_s = s.sample_period_s;
    ch.targets = {{tau * kSpeedOfLight * s.sample_period_s / 2.0, 0.0, {1.0, 0.0}}};
    const EchoSynthesizer syn(x, ch);
    SubblockSet set;
    set.fft_pad = 2;
    for (long long q = 0; q < 16; ++q) set.blocks.push_back(subband_receive(syn.block(q, 1).samples, s).samples);
    RdmGeometry g = geom(s.sample_period_s);
    const auto map = rdm(correlate_subblocks(set, x.samples), set.fft_pad, g);
    CfarConfig cfg;
    const auto rep = temp_detect(map, cfar_floor(map, cfg), cfg);
    REQUIRE(rep.detections.size() == 1);
    CHECK(rep.detections[0].range_bin == static_cast<std::size_t>(tau));
    CHECK(rep.detections[0].doppler_bin == 0);
    CHECK(rep.detections[0].range_m == kSpeedOfLight * double(tau) * s.sample_period_s / 2.0);
    const auto tb = target_bins(ch.targets[0], map.geometry, ch.upsample_factor);
    CHECK(detection_matches(rep.detections[0], tb, map.geometry));
    CHECK(map.geometry.N == N);
}
