#include "jrc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jrc/rng.hpp"

namespace jrc {

void Target::validate() const {
    require(std::isfinite(range_m) && range_m >= 0.0, "target: range must be >= 0");
    require(std::isfinite(velocity_mps), "target: velocity must be finite");
    require(std::abs(gain) > 0.0, "target: gain must be nonzero");
}

void ImpairmentConfig::validate() const {
    require(std::isfinite(iq_amp) && std::isfinite(iq_phase_rad), "impairments: I/Q parameters must be finite");
    require(pn_sigma_rad >= 0.0, "impairments: phase-noise sigma must be >= 0");
}

void ChannelConfig::validate() const {
    require(carrier_hz > 0.0, "channel: carrier must be positive");
    require(sample_period_s > 0.0, "channel: sample period must be positive");
    require(upsample_factor >= 1, "channel: upsample factor must be >= 1");
    require(!snr_db || !std::isnan(*snr_db), "channel: snr must be a number");
    impairments.validate();
    for (const auto& t : targets) t.validate();
}

double normalized_doppler(double velocity_mps, double carrier_hz, double sample_period_s) {
    return 2.0 * velocity_mps * carrier_hz * sample_period_s / kSpeedOfLight;
}

IqCoeffs iq_coeffs(const ImpairmentConfig& cfg) {
    const double c = std::cos(cfg.iq_phase_rad), s = std::sin(cfg.iq_phase_rad);
    return {{c, cfg.iq_amp * s}, {cfg.iq_amp * c, -s}};
}

std::vector<double> phase_noise_path(std::size_t length, const ImpairmentConfig& cfg, std::uint64_t seed) {
    require(length >= 1, "phase_noise_path: length must be >= 1");
    cfg.validate();
    std::vector<double> th(length, 0.0);
    Rng rng(seed);
    if (cfg.pn_initial == PhaseNoiseInit::uniform_random) {
        std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
        th[0] = u(rng);
    }
    if (cfg.pn_sigma_rad > 0.0) {
        std::normal_distribution<double> g(0.0, cfg.pn_sigma_rad);
        for (std::size_t n = 1; n < length; ++n) th[n] = th[n - 1] + g(rng);
    } else {
        std::fill(th.begin() + 1, th.end(), th[0]);
    }
    return th;
}

long long delay_samples_hi(double range_m, double sample_period_s, int upsample_factor) {
    return std::llround(2.0 * range_m / kSpeedOfLight / (sample_period_s / upsample_factor));
}

EchoSynthesizer::EchoSynthesizer(const ComplexSequence& x, const ChannelConfig& cfg)
    : cfg_(cfg), period_(x.sample_period_s), len_(x.size()) {
    cfg_.validate();
    x.validate("echo input");
    const long long N = static_cast<long long>(x.size());
    const InterpolationKernel kernel(cfg_.upsample_factor);
    CVec aggregate(x.size(), cdouble{});
    for (std::size_t i = 0; i < cfg_.targets.size(); ++i) {
        const auto& t = cfg_.targets[i];
        const long long d_hi = delay_samples_hi(t.range_m, cfg_.sample_period_s, cfg_.upsample_factor);
        CVec d = cfg_.upsample_factor == 1 ? CVec(x.samples) : delay_cyclic(x.samples, d_hi, kernel);
        if (cfg_.upsample_factor == 1) std::rotate(d.begin(), d.end() - mod(d_hi, N), d.end());
        for (auto& v : d) v *= t.gain;
        for (std::size_t n = 0; n < d.size(); ++n) aggregate[n] += d[n];
        const long long tau = std::llround(static_cast<double>(d_hi) / cfg_.upsample_factor);
        if (tau >= N) wrapped_.push_back(i);
        delayed_.push_back(std::move(d));
        tau_.push_back(tau);
        doppler_.push_back(normalized_doppler(t.velocity_mps, cfg_.carrier_hz, cfg_.sample_period_s));
    }
    if (cfg_.snr_db && !(std::isinf(*cfg_.snr_db) && *cfg_.snr_db > 0)) {
        const double p = mean_power(aggregate);
        require(p > 0.0, "channel: noise referenced to a zero-power echo");
        noise_var_ = p / std::pow(10.0, *cfg_.snr_db / 10.0);
    }
}

PropagationResult EchoSynthesizer::block(long long block_index, std::uint64_t seed) const {
    const std::size_t N = len_;
    PropagationResult res;
    res.wrapped_targets = wrapped_;
    CVec z(N, cdouble{});
    const auto& imp = cfg_.impairments;
    const bool pn = imp.pn_sigma_rad > 0.0;
    const long long tau_max = tau_.empty() ? 0 : *std::max_element(tau_.begin(), tau_.end());
    std::vector<double> theta;
    if (pn) theta = phase_noise_path(N + static_cast<std::size_t>(tau_max), imp, derive_seed(seed, {1}));

    for (std::size_t i = 0; i < delayed_.size(); ++i) {
        const double v = doppler_[i];
        const double q0 = static_cast<double>(block_index) * static_cast<double>(N);
        const auto& d = delayed_[i];
        for (std::size_t n = 0; n < N; ++n) {
            double ph = 2.0 * kPi * (static_cast<double>(n) + q0) * v;
            // theta_{n - tau} - theta_n, path index shifted by tau_max
            if (pn) ph += theta[n + static_cast<std::size_t>(tau_max - tau_[i])] - theta[n + static_cast<std::size_t>(tau_max)];
            z[n] += d[n] * std::polar(1.0, ph);
        }
    }
    if (noise_var_ > 0.0) {
        CVec w(N, cdouble{});
        add_noise(w, noise_var_, derive_seed(seed, {2}));
        for (std::size_t n = 0; n < N; ++n)
            z[n] += pn ? w[n] * std::polar(1.0, -theta[n + static_cast<std::size_t>(tau_max)]) : w[n];
    }
    const IqCoeffs iq = iq_coeffs(imp);
    if (iq.nu != cdouble{} || iq.mu != cdouble{1.0, 0.0}) {
        for (auto& v : z) v = iq.mu * v + iq.nu * std::conj(v);
    }
    res.samples = {std::move(z), period_};
    return res;
}

PropagationResult propagate(const ComplexSequence& x, const ChannelConfig& cfg, long long block_index,
                            std::uint64_t seed) {
    if (cfg.targets.empty()) {
        // noise cannot be referenced to an absent echo
        PropagationResult r;
        r.samples = {CVec(x.size(), cdouble{}), x.sample_period_s};
        return r;
    }
    return EchoSynthesizer(x, cfg).block(block_index, seed);
}

}  // namespace jrc
