#include "jrc/radar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jrc/dsp.hpp"
#include "jrc/fft.hpp"

namespace jrc {

std::vector<CVec> subband_sample(std::span<const cdouble> block, const MsQpSpec& spec) {
    const auto N = static_cast<std::size_t>(spec.total_len());
    require(block.size() == N, "subband_sample: block length must equal N");
    const CVec Y = fft::forward(block);
    const auto f = spec.offsets();
    std::vector<CVec> out(spec.num_subbands());
    for (std::size_t m = 0; m < out.size(); ++m) {
        const auto L = static_cast<std::size_t>(spec.subbands[m].length);
        CVec band(Y.begin() + f[m], Y.begin() + f[m] + static_cast<long long>(L));
        out[m] = fft::inverse(band);
        const double scale = 1.0 / static_cast<double>(N);  // (L / N) * (1 / L)
        for (auto& v : out[m]) v *= scale;
    }
    return out;
}

CVec subband_reassemble_spectrum(const std::vector<CVec>& samples, const MsQpSpec& spec) {
    require(samples.size() == spec.num_subbands(), "subband_reassemble: subband count mismatch");
    const auto N = static_cast<std::size_t>(spec.total_len());
    const auto f = spec.offsets();
    CVec Y(N, cdouble{});
    for (std::size_t m = 0; m < samples.size(); ++m) {
        require(static_cast<long long>(samples[m].size()) == spec.subbands[m].length,
                "subband_reassemble: sample count must equal L_m");
        const CVec band = fft::forward(samples[m]);
        const double scale = static_cast<double>(N) / static_cast<double>(band.size());
        for (std::size_t k = 0; k < band.size(); ++k) Y[static_cast<std::size_t>(f[m]) + k] = band[k] * scale;
    }
    return Y;
}

ComplexSequence subband_receive(const ComplexSequence& y, const MsQpSpec& spec) {
    spec.validate();
    y.validate("subband_receive input");
    const auto N = static_cast<std::size_t>(spec.total_len());
    require(y.size() % N == 0, "subband_receive: length must be a multiple of N");
    CVec out(y.size());
    for (std::size_t b = 0; b < y.size() / N; ++b) {
        const auto block = std::span<const cdouble>(y.samples).subspan(b * N, N);
        const CVec Y = subband_reassemble_spectrum(subband_sample(block, spec), spec);
        CVec x = fft::inverse(Y);
        for (std::size_t n = 0; n < N; ++n) out[b * N + n] = x[n] / static_cast<double>(N);
    }
    return {std::move(out), y.sample_period_s};
}

void SubblockSet::validate() const {
    require(!blocks.empty(), "subblocks: Q must be >= 1");
    require(fft_pad >= 1, "subblocks: fft pad w must be >= 1");
    for (const auto& b : blocks) require(b.size() == blocks[0].size() && !b.empty(), "subblocks: unequal block lengths");
}

Matrix<cdouble> correlate_subblocks(const SubblockSet& rx, std::span<const cdouble> reference) {
    rx.validate();
    require(reference.size() == rx.block_len(), "correlate_subblocks: reference length must equal N");
    const std::size_t N = rx.block_len(), Q = rx.Q();
    const CyclicCorrelator corr(reference);
    Matrix<cdouble> out(N, Q);
#pragma omp parallel
    {
        CVec r(N);
#pragma omp for schedule(static)
        for (long long q = 0; q < static_cast<long long>(Q); ++q) {
            corr.correlate(rx.blocks[static_cast<std::size_t>(q)], r);
            for (std::size_t n = 0; n < N; ++n) out(n, static_cast<std::size_t>(q)) = r[n];
        }
    }
    return out;
}

Matrix<double> RangeDopplerMap::power() const {
    Matrix<double> p(N(), Q0());
    const auto c = cells.data();
    auto d = p.data();
    for (std::size_t i = 0; i < c.size(); ++i) d[i] = std::norm(c[i]);
    return p;
}

RangeDopplerMap rdm(const Matrix<cdouble>& corr, int pad_factor, const RdmGeometry& geometry) {
    require(pad_factor >= 1, "rdm: pad factor must be >= 1");
    const std::size_t N = corr.rows(), Q = corr.cols();
    const std::size_t Q0 = Q * static_cast<std::size_t>(pad_factor);
    RangeDopplerMap map{Matrix<cdouble>(N, Q0), geometry};
    map.geometry.N = N;
    map.geometry.Q0 = Q0;
#pragma omp parallel
    {
        CVec row(Q0);
#pragma omp for schedule(static)
        for (long long n = 0; n < static_cast<long long>(N); ++n) {
            std::fill(row.begin(), row.end(), cdouble{});
            const auto src = corr.row(static_cast<std::size_t>(n));
            std::copy(src.begin(), src.end(), row.begin());
            fft::forward(row, map.cells.row(static_cast<std::size_t>(n)));
        }
    }
    return map;
}

void CfarConfig::validate() const {
    require(threshold > 0.0, "cfar: threshold must be positive");
    require(train_cells >= 1, "cfar: train cells must be >= 1");
    require(guard_cells >= 0, "cfar: guard cells must be >= 0");
    require(temp_radius >= 1, "cfar: temp radius must be >= 1");
}

Matrix<double> cfar_floor(const Matrix<double>& power, const CfarConfig& cfg) {
    cfg.validate();
    const long long N = static_cast<long long>(power.rows());
    const std::size_t K = power.cols();
    const long long G = cfg.guard_cells, T = cfg.train_cells;
    require(2 * (G + T) + 1 <= N, "cfar: training window does not fit in N range bins");
    Matrix<double> out(power.rows(), K);
    const double norm = 1.0 / static_cast<double>(2 * T);
    // Window of n: (n - G - T .. n - G - 1) and (n + G + 1 .. n + G + T), cyclic.
    // Running sums per Doppler column, columns split across threads.
#pragma omp parallel
    {
        std::vector<double> lo, hi;
#pragma omp for schedule(static)
        for (long long kb = 0; kb < static_cast<long long>(K); kb += 64) {
            const std::size_t k0 = static_cast<std::size_t>(kb);
            const std::size_t k1 = std::min(K, k0 + 64);
            lo.assign(k1 - k0, 0.0);
            hi.assign(k1 - k0, 0.0);
            for (long long t = 1; t <= T; ++t) {
                const auto a = power.row(static_cast<std::size_t>(mod(-G - t, N)));
                const auto b = power.row(static_cast<std::size_t>(mod(G + t, N)));
                for (std::size_t k = k0; k < k1; ++k) {
                    lo[k - k0] += a[k];
                    hi[k - k0] += b[k];
                }
            }
            for (long long n = 0; n < N; ++n) {
                auto o = out.row(static_cast<std::size_t>(n));
                for (std::size_t k = k0; k < k1; ++k) o[k] = (lo[k - k0] + hi[k - k0]) * norm;
                // slide to n + 1
                const auto lo_in = power.row(static_cast<std::size_t>(mod(n + 1 - G - 1, N)));
                const auto lo_out = power.row(static_cast<std::size_t>(mod(n - G - T, N)));
                const auto hi_in = power.row(static_cast<std::size_t>(mod(n + 1 + G + T, N)));
                const auto hi_out = power.row(static_cast<std::size_t>(mod(n + G + 1, N)));
                for (std::size_t k = k0; k < k1; ++k) {
                    lo[k - k0] += lo_in[k] - lo_out[k];
                    hi[k - k0] += hi_in[k] - hi_out[k];
                }
            }
        }
    }
    return out;
}

Matrix<double> cfar_floor(const RangeDopplerMap& map, const CfarConfig& cfg) { return cfar_floor(map.power(), cfg); }

double estimate_range(std::size_t range_bin, double sample_period_s) {
    return kSpeedOfLight * static_cast<double>(range_bin) * sample_period_s / 2.0;
}

double estimate_velocity(std::size_t doppler_bin, std::size_t Q0, std::size_t N, double carrier_hz,
                         double sample_period_s) {
    require(Q0 >= 1 && doppler_bin < Q0, "estimate_velocity: doppler bin out of range");
    double k = static_cast<double>(doppler_bin);
    if (2 * doppler_bin >= Q0) k -= static_cast<double>(Q0);
    return kSpeedOfLight * k / (2.0 * static_cast<double>(Q0) * static_cast<double>(N) * carrier_hz * sample_period_s);
}

DetectionReport temp_detect(const Matrix<double>& power, const Matrix<double>& floor, const CfarConfig& cfg,
                            const RdmGeometry& geometry) {
    cfg.validate();
    require(power.rows() == floor.rows() && power.cols() == floor.cols(), "temp_detect: floor dimension mismatch");
    const std::size_t N = power.rows(), K = power.cols();
    require(N >= 1 && K >= 1, "temp_detect: empty map");
    std::vector<std::size_t> khat(N);
    std::vector<double> peak(N);
    for (std::size_t n = 0; n < N; ++n) {
        const auto row = power.row(n);
        std::size_t best = 0;
        for (std::size_t k = 1; k < K; ++k)
            if (row[k] > row[best]) best = k;
        khat[n] = best;
        peak[n] = row[best];
    }
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return peak[a] > peak[b]; });

    auto make = [&](std::size_t n) {
        Detection d;
        d.range_bin = n;
        d.doppler_bin = khat[n];
        d.power = peak[n];
        const double fl = floor(n, khat[n]);
        d.ratio = fl > 0.0 ? peak[n] / fl : std::numeric_limits<double>::infinity();
        d.range_m = estimate_range(n, geometry.sample_period_s);
        d.velocity_mps = estimate_velocity(khat[n], K, N, geometry.carrier_hz, geometry.sample_period_s);
        return d;
    };

    DetectionReport rep;
    rep.peak = make(order[0]);
    std::vector<char> removed(N, 0);
    const long long R = cfg.temp_radius;
    for (std::size_t n : order) {
        if (removed[n]) continue;
        const Detection d = make(n);
        if (d.ratio >= cfg.threshold) {
            rep.detections.push_back(d);
            if (2 * R + 1 >= static_cast<long long>(N)) {
                std::fill(removed.begin(), removed.end(), 1);
            } else {
                for (long long j = -R; j <= R; ++j)
                    removed[static_cast<std::size_t>(mod(static_cast<long long>(n) + j, static_cast<long long>(N)))] = 1;
            }
        } else {
            removed[n] = 1;
        }
    }
    return rep;
}

DetectionReport temp_detect(const RangeDopplerMap& map, const Matrix<double>& floor, const CfarConfig& cfg) {
    return temp_detect(map.power(), floor, cfg, map.geometry);
}

SubblockSet de_msqp_split(const ComplexSequence& frame_rx, const DeMsQpSpec& spec) {
    spec.validate();
    const auto N = static_cast<std::size_t>(spec.base.total_len());
    const auto cp = static_cast<std::size_t>(spec.cp_len);
    const std::size_t Mp = static_cast<std::size_t>(spec.extension);
    require(frame_rx.size() == cp + Mp * N, "de_msqp_split: frame length must be cp + M' N");
    SubblockSet set;
    for (std::size_t g = 0; g < Mp; ++g) {
        const auto first = frame_rx.samples.begin() + static_cast<long long>(cp + g * N);
        set.blocks.emplace_back(first, first + static_cast<long long>(N));
    }
    return set;
}

TargetBins target_bins(const Target& t, const RdmGeometry& g, int upsample_factor) {
    TargetBins b;
    b.range_bin = static_cast<double>(delay_samples_hi(t.range_m, g.sample_period_s, upsample_factor)) / upsample_factor;
    b.doppler_bin = normalized_doppler(t.velocity_mps, g.carrier_hz, g.sample_period_s) * static_cast<double>(g.N) *
                    static_cast<double>(g.Q0);
    return b;
}

namespace {
double cyclic_distance(double a, double b, double period) {
    double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}
}  // namespace

bool detection_matches(const Detection& d, const TargetBins& t, const RdmGeometry& g, double tol) {
    return cyclic_distance(static_cast<double>(d.range_bin), t.range_bin, static_cast<double>(g.N)) <= tol &&
           cyclic_distance(static_cast<double>(d.doppler_bin), t.doppler_bin, static_cast<double>(g.Q0)) <= tol;
}

namespace serial {

Matrix<cdouble> correlate_subblocks(const SubblockSet& rx, std::span<const cdouble> reference) {
    rx.validate();
    require(reference.size() == rx.block_len(), "correlate_subblocks: reference length must equal N");
    const std::size_t N = rx.block_len();
    Matrix<cdouble> out(N, rx.Q());
    for (std::size_t q = 0; q < rx.Q(); ++q) {
        const auto& y = rx.blocks[q];
        for (std::size_t n = 0; n < N; ++n) {
            cdouble acc{};
            for (std::size_t i = 0; i < N; ++i) acc += y[i] * std::conj(reference[(i + N - n) % N]);
            out(n, q) = acc;
        }
    }
    return out;
}

RangeDopplerMap rdm(const Matrix<cdouble>& corr, int pad_factor, const RdmGeometry& geometry) {
    require(pad_factor >= 1, "rdm: pad factor must be >= 1");
    const std::size_t N = corr.rows(), Q = corr.cols();
    const std::size_t Q0 = Q * static_cast<std::size_t>(pad_factor);
    RangeDopplerMap map{Matrix<cdouble>(N, Q0), geometry};
    map.geometry.N = N;
    map.geometry.Q0 = Q0;
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t k = 0; k < Q0; ++k) {
            cdouble acc{};
            for (std::size_t q = 0; q < Q; ++q)
                acc += corr(n, q) * std::polar(1.0, -2.0 * kPi * static_cast<double>((q * k) % Q0) / static_cast<double>(Q0));
            map.cells(n, k) = acc;
        }
    }
    return map;
}

Matrix<double> cfar_floor(const Matrix<double>& power, const CfarConfig& cfg) {
    cfg.validate();
    const long long N = static_cast<long long>(power.rows());
    const long long G = cfg.guard_cells, T = cfg.train_cells;
    require(2 * (G + T) + 1 <= N, "cfar: training window does not fit in N range bins");
    Matrix<double> out(power.rows(), power.cols());
    for (long long n = 0; n < N; ++n) {
        for (std::size_t k = 0; k < power.cols(); ++k) {
            double s = 0.0;
            for (long long t = G + 1; t <= G + T; ++t)
                s += power(static_cast<std::size_t>(mod(n - t, N)), k) + power(static_cast<std::size_t>(mod(n + t, N)), k);
            out(static_cast<std::size_t>(n), k) = s / static_cast<double>(2 * T);
        }
    }
    return out;
}

}  // namespace serial
}  // namespace jrc
