#pragma once

// Data-embedded MS-QP frame: every subband carries its ZC sequence repeated
// M' times (DFT residue class 0) plus M'-1 time-extended data streams on the
// remaining residue classes.

#include <cstdint>
#include <vector>

#include "jrc/types.hpp"
#include "jrc/waveforms/constellation.hpp"
#include "jrc/waveforms/msqp.hpp"

namespace jrc {

/// Block g of the output is x * exp(j 2 pi g i / M'), g = 0..M'-1.
ComplexSequence time_extend(const ComplexSequence& x, int stream_index, int extension);

struct DeMsQpSpec {
    MsQpSpec base;
    int extension = 1;             ///< M'
    long long guard_len_ext = 0;   ///< L'_G
    long long cp_len = 0;
    Constellation constellation = Constellation::qpsk();

    void validate() const;
    int num_streams() const { return extension - 1; }
    long long ext_subband_len(std::size_t m) const { return base.subbands[m].length * extension; }
    /// N' = sum L'_m + M L'_G.
    long long frame_len() const;
    /// Start bin f'_m of every extended subband.
    std::vector<long long> ext_offsets() const;
    /// True when each length-N block of the frame carries exactly one MS-QP
    /// period (L'_G = M' L_G, so N' = M' N).
    bool block_aligned() const;
    /// Number of data symbol sequences expected by de_msqp_build, M (M'-1).
    std::size_t num_data_sequences() const { return base.num_subbands() * static_cast<std::size_t>(num_streams()); }
    std::size_t data_index(std::size_t m, int stream) const {
        return m * static_cast<std::size_t>(num_streams()) + static_cast<std::size_t>(stream - 1);
    }
};

struct DeMsQpBuildOptions {
    /// Amplitude applied to every data stream; 0 leaves the sensing comb
    /// alone. Only meant for tests.
    double data_gain = 1.0;
};

/// Frame of length cp_len + N'. data[data_index(m, i)] holds L_m symbols of
/// stream i on subband m. The frame is scaled so the sensing comb carries
/// 1/M' of the power and each length-N block of the sensing part equals
/// msqp_build(base) / sqrt(M') when block_aligned().
ComplexSequence de_msqp_build(const DeMsQpSpec& spec, const std::vector<CVec>& data,
                              const DeMsQpBuildOptions& options = {});

/// Length-N' spectrum before the 1/sqrt(N') synthesis factor and frame
/// scaling: bins f'_m + k hold exp(j phi_m) DFT_{L'}(x'_m)[k] / sqrt(L'_m).
CVec de_msqp_spectrum(const DeMsQpSpec& spec, const std::vector<CVec>& data, double data_gain = 1.0);

/// Scale between the unit-bin spectrum and the transmitted frame,
/// frame = IDFT_unnorm(X) * frame_scale / sqrt(N').
double de_msqp_frame_scale(const DeMsQpSpec& spec, double data_gain = 1.0);

/// Sensing-comb values exp(j phi_m) DFT_{L'}(b'_m)[M' k] / sqrt(L'_m), k = 0..L_m-1.
CVec de_msqp_comb(const DeMsQpSpec& spec, std::size_t m);

/// Exact rational spectral efficiency in bit/s/Hz.
struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// (N' - M L'_G) / (N' + L_cp) * (M' - 1) / M' * log2 |constellation|.
Rational spectral_efficiency_ratio(const DeMsQpSpec& spec);
double spectral_efficiency(const DeMsQpSpec& spec);

/// Random symbols drawn uniformly from the constellation, one sequence per
/// (subband, stream), together with the bits they carry.
struct DataPayload {
    std::vector<CVec> symbols;
    std::vector<std::vector<std::uint8_t>> bits;
};
DataPayload random_payload(const DeMsQpSpec& spec, std::uint64_t seed);

}  // namespace jrc
