#pragma once

// Communication receiver for DE-MS-QP frames: per-subband DFT, residue-class
// stream split, comb-based channel estimate, one-tap equalizer, phase
// adjustment and minimum-distance detection.

#include <cstdint>
#include <vector>

#include "jrc/types.hpp"
#include "jrc/waveforms/de_msqp.hpp"

namespace jrc {

/// bins[m][i][k'] = Y'_m[M' k' + i], scaled to the transmit spectrum units
/// of de_msqp_spectrum. Stream 0 is the sensing comb.
struct StreamGrid {
    std::vector<std::vector<CVec>> bins;
    int extension = 1;
};

/// Drops the first cp_len samples.
ComplexSequence strip_cp(const ComplexSequence& frame_rx, const DeMsQpSpec& spec);

/// frame_rx has the CP removed (length N').
StreamGrid extract_streams(const ComplexSequence& frame_rx, const DeMsQpSpec& spec);

/// gains[m][k] for every bin k of extended subband m (length L'_m).
struct ChannelEstimate {
    std::vector<CVec> gains;
};

/// Least squares on the comb bins, linear interpolation in between, held
/// constant past the last comb bin. Comb bins with a zero reference are
/// skipped and interpolated over.
ChannelEstimate channel_estimate(const StreamGrid& grid, const DeMsQpSpec& spec);

struct EqualizerOptions {
    /// Apply the exp(j 2 pi i n / L'_m) ramp of the phase adjustment.
    bool phase_ramp = true;
};

struct Demodulated {
    std::vector<CVec> symbols;                   ///< soft symbols, data_index order
    std::vector<std::vector<std::size_t>> decisions;
    std::vector<std::vector<std::uint8_t>> bits;
};

Demodulated equalize_and_demap(const StreamGrid& grid, const ChannelEstimate& gains, const DeMsQpSpec& spec,
                               const EqualizerOptions& options = {});

struct BerReport {
    std::uint64_t bits_total = 0;
    std::uint64_t bits_errored = 0;
    double ber = 0.0;
};

BerReport ber_count(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);
BerReport ber_count(const std::vector<std::vector<std::uint8_t>>& tx, const std::vector<std::vector<std::uint8_t>>& rx);

}  // namespace jrc
