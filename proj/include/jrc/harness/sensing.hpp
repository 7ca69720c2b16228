#pragma once

// One radar trial end to end: echo synthesis, receiver front end,
// correlation, range-Doppler map and CA-CFAR floor.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jrc/channel.hpp"
#include "jrc/harness/config.hpp"
#include "jrc/matrix.hpp"
#include "jrc/radar.hpp"
#include "jrc/waveforms/de_msqp.hpp"
#include "jrc/waveforms/msqp.hpp"

namespace jrc::harness {

/// Transmit unit and matching receiver for one waveform.
struct SensingChain {
    std::string label;
    double sample_period_s = 1e-10;
    CVec reference;                   ///< length-N correlation reference
    std::optional<MsQpSpec> subband;  ///< set when each block is sampled per subband
    std::optional<DeMsQpSpec> frame;  ///< set for DE-MS-QP: fresh data every frame
    ComplexSequence tx;               ///< fixed transmit unit (non DE-MS-QP)
    int blocks_per_unit = 1;          ///< M'

    std::size_t N() const { return reference.size(); }
};

/// Builds the chain; MS-QP phases come from the search when requested.
SensingChain make_chain(const WaveformConfig& w, std::uint64_t search_budget = std::uint64_t{1} << 20,
                        std::uint64_t seed = 0);

/// Single target drawn uniformly from the configured range and velocity
/// intervals with a uniform random gain phase.
Target draw_target(const ChannelSection& ch, std::uint64_t seed);

ChannelConfig channel_config(const ChannelSection& ch, double sample_period_s, std::optional<double> snr_db,
                             const std::vector<Target>& targets);

struct SensedMap {
    Matrix<double> power;
    Matrix<double> floor;
    RdmGeometry geometry;
};

/// Q length-N blocks (Q / M' transmit units) through the channel and
/// receiver, then RDM with pad factor w and the CFAR floor.
SensedMap sense(const SensingChain& chain, const ChannelConfig& ch, const CfarConfig& cfar, int Q, int w,
                std::uint64_t seed);

struct Estimate {
    bool detected = false;  ///< TEMP accepted at least one cell
    double range_m = 0.0;
    double velocity_mps = 0.0;
};

/// Strongest TEMP detection, or the map peak when nothing crosses Gamma.
Estimate estimate(const DetectionReport& rep);

/// True when some detection matches no target.
bool has_false_alarm(const DetectionReport& rep, const std::vector<Target>& targets, const RdmGeometry& g,
                     int upsample_factor);

/// Range and velocity bin widths of a map.
double range_bin_m(const RdmGeometry& g);
double velocity_bin_mps(const RdmGeometry& g);

/// Correlation of the Doppler-shifted subband-m subsequence, sampled at the
/// subband rate, against its clean low-rate samples. `vl` is the Doppler per
/// low-rate sample times L_m. Magnitudes, lag 0 first.
std::vector<double> doppler_profile(const MsQpSpec& spec, std::size_t m, double vl);

}  // namespace jrc::harness
