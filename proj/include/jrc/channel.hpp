#pragma once

// Mono-static echo channel: per-target cyclic fractional delay, Doppler and
// complex gain, receive I/Q imbalance, shared-LO phase noise and AWGN.

#include <cstdint>
#include <optional>
#include <vector>

#include "jrc/dsp.hpp"
#include "jrc/types.hpp"

namespace jrc {

struct Target {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    cdouble gain{1.0, 0.0};

    void validate() const;
};

enum class PhaseNoiseInit { uniform_random, zero };

struct ImpairmentConfig {
    double iq_amp = 0.0;        ///< epsilon_r
    double iq_phase_rad = 0.0;  ///< phi_r
    double pn_sigma_rad = 0.0;  ///< std of each random-walk increment
    PhaseNoiseInit pn_initial = PhaseNoiseInit::zero;

    void validate() const;
};

struct ChannelConfig {
    double carrier_hz = 3e11;
    double sample_period_s = 1e-10;
    /// Receiver SNR against the aggregate echo power; unset disables noise.
    std::optional<double> snr_db;
    int upsample_factor = 4;
    ImpairmentConfig impairments;
    std::vector<Target> targets;

    void validate() const;
};

/// v = 2 u f_c T_s / c0.
double normalized_doppler(double velocity_mps, double carrier_hz, double sample_period_s);

struct IqCoeffs {
    cdouble mu;
    cdouble nu;
};

/// mu = cos(phi) + j eps sin(phi), nu = eps cos(phi) - j sin(phi).
IqCoeffs iq_coeffs(const ImpairmentConfig& cfg);

/// Wiener phase path theta_0..theta_{length-1}.
std::vector<double> phase_noise_path(std::size_t length, const ImpairmentConfig& cfg, std::uint64_t seed);

/// Round-trip delay in samples at the upsampled rate, round(2 d / c0 / (T_s / F)).
long long delay_samples_hi(double range_m, double sample_period_s, int upsample_factor);

struct PropagationResult {
    ComplexSequence samples;
    /// Targets whose delay reaches past one block (range aliasing).
    std::vector<std::size_t> wrapped_targets;
};

/// Echo of one block. The delayed copies of x depend only on x and the
/// targets, so they are computed once and reused for every block.
class EchoSynthesizer {
public:
    EchoSynthesizer(const ComplexSequence& x, const ChannelConfig& cfg);

    /// Block q of a periodic transmission of x. Deterministic given seed.
    PropagationResult block(long long block_index, std::uint64_t seed) const;

    /// Noise variance that block() adds (0 when noise is off).
    double noise_variance() const { return noise_var_; }
    const std::vector<std::size_t>& wrapped_targets() const { return wrapped_; }

private:
    ChannelConfig cfg_;
    double period_;
    std::size_t len_;
    std::vector<CVec> delayed_;  // h_i x[n - tau_i], fractional delay applied
    std::vector<long long> tau_;  // integer delay in base-rate samples
    std::vector<double> doppler_;
    std::vector<std::size_t> wrapped_;
    double noise_var_ = 0.0;
};

/// Echo of block q of x; builds a fresh EchoSynthesizer.
PropagationResult propagate(const ComplexSequence& x, const ChannelConfig& cfg, long long block_index,
                            std::uint64_t seed);

}  // namespace jrc
