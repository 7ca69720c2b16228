#pragma once

// Experiment configuration: JSON documents with a schema_version field.
// Unknown keys are rejected so a typo never silently falls back to a default.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jrc/channel.hpp"
#include "jrc/radar.hpp"

namespace jrc::harness {

inline constexpr int kSchemaVersion = 1;

enum class Scenario { papr, root_design, false_alarm, ranging, velocity, tradeoff, xcorr, loopback_ber };

const std::vector<std::string>& scenario_names();
std::string scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& name);

/// ZC root choice: an explicit value or one of the two Doppler-robust roots.
struct RootRule {
    enum class Kind { value, designed, low, high } kind = Kind::designed;
    long long value = 0;

    long long resolve(long long length) const;
    std::string describe() const;
};

struct WaveformConfig {
    std::string kind = "msqp";  ///< msqp | de-msqp | zc | lfm
    std::string label;
    double sample_period_s = 1e-10;

    // msqp and de-msqp
    int subbands = 10;
    long long subband_len = 1007;
    long long guard_len = 100;
    RootRule root;
    bool phase_search = false;
    /// "subband" samples every subband at its own low rate; "full" correlates
    /// the wideband samples directly.
    std::string sampling = "subband";

    // de-msqp
    int extension = 2;
    std::optional<long long> guard_len_ext;  ///< default M' L_G
    long long cp_len = 0;

    // zc
    long long zc_len = 11077;

    // lfm
    double lfm_bandwidth_hz = 1e10;
    double lfm_duration_s = 1.1077e-6;
};

struct ChannelSection {
    double carrier_hz = 3e11;
    int upsample_factor = 4;
    std::optional<double> snr_db;
    double iq_amp = 0.0;
    double iq_phase_deg = 0.0;
    double pn_sigma_deg = 0.0;
    PhaseNoiseInit pn_initial = PhaseNoiseInit::zero;
    double range_min_m = 0.0, range_max_m = 3.0;
    double velocity_min_mps = -20.0, velocity_max_mps = 20.0;
};

struct CfarSection {
    double threshold_db = 13.0;
    int train_cells = 32;
    int guard_cells = 4;
    int temp_radius = 40;

    CfarConfig to_config() const;
};

struct CpiSection {
    int Q = 128;  ///< length-N blocks per CPI; DE-MS-QP uses Q / M' frames
    int w = 4;
};

struct SweepSection {
    std::vector<double> snr_db;
    std::vector<double> threshold_db;
    std::vector<int> extension;
    std::vector<double> ebn0_db;
};

/// Doppler range-profile probe of one subband.
struct ProfileSection {
    double vl = 0.4;         ///< Doppler per low-rate sample times L
    long long distance = 40;  ///< cyclic distance that separates near from far sidelobes
    double level_db = -20.0;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    Scenario scenario = Scenario::papr;
    std::uint64_t trials = 200;
    std::uint64_t base_seed = 1;
    double scale = 1.0;
    std::uint64_t search_budget = std::uint64_t{1} << 20;
    std::vector<WaveformConfig> waveforms;
    ChannelSection channel;
    CfarSection cfar;
    CpiSection cpi;
    SweepSection sweep;
    ProfileSection profile;
};

struct FieldError {
    std::string field;
    std::string message;
};

/// Every problem found in a config, not only the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<FieldError> errors);
    const std::vector<FieldError>& errors() const { return errors_; }

private:
    std::vector<FieldError> errors_;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
/// Throws ConfigError listing every invalid field.
void validate(const ExperimentConfig& cfg);

/// Applies `scale` to subband, ZC and LFM lengths (odd lengths are kept odd)
/// and to Q; the result has scale 1.
ExperimentConfig apply_scale(const ExperimentConfig& cfg);

}  // namespace jrc::harness
