#pragma once

// Sensing receiver: per-subband low-rate sampling, subblock correlation,
// range-Doppler map, CA-CFAR floor, TEMP detection and the bin-to-unit
// estimators.

#include <cstdint>
#include <vector>

#include "jrc/channel.hpp"
#include "jrc/matrix.hpp"
#include "jrc/types.hpp"
#include "jrc/waveforms/de_msqp.hpp"
#include "jrc/waveforms/msqp.hpp"

namespace jrc {

/// Low-rate samples of every subband of one length-N block: subband m is
/// band-selected, shifted to baseband and sampled L_m times per block
/// (period N T_s / L_m).
std::vector<CVec> subband_sample(std::span<const cdouble> block, const MsQpSpec& spec);

/// Size-N spectrum rebuilt from the low-rate samples; guard bins are zero.
CVec subband_reassemble_spectrum(const std::vector<CVec>& samples, const MsQpSpec& spec);

/// Band-select, low-rate sample and reassemble every length-N block of y.
ComplexSequence subband_receive(const ComplexSequence& y, const MsQpSpec& spec);

struct SubblockSet {
    std::vector<CVec> blocks;
    int fft_pad = 1;  ///< w, Q0 = w Q

    std::size_t Q() const { return blocks.size(); }
    std::size_t block_len() const { return blocks.empty() ? 0 : blocks[0].size(); }
    std::size_t Q0() const { return Q() * static_cast<std::size_t>(fft_pad); }
    void validate() const;
};

/// corr(n, q) = sum_i y_q[i] conj(ref[(i - n) mod N]); N x Q, one row per range bin.
Matrix<cdouble> correlate_subblocks(const SubblockSet& rx, std::span<const cdouble> reference);

struct RdmGeometry {
    double sample_period_s = 1e-10;
    std::size_t N = 0;
    std::size_t Q0 = 0;
    double carrier_hz = 3e11;
};

struct RangeDopplerMap {
    Matrix<cdouble> cells;  ///< N x Q0
    RdmGeometry geometry;

    std::size_t N() const { return cells.rows(); }
    std::size_t Q0() const { return cells.cols(); }
    /// |R|^2 as an N x Q0 matrix.
    Matrix<double> power() const;
};

/// R(n, k) = sum_q corr(n, q) exp(-j 2 pi q k / Q0), Q0 = w Q.
RangeDopplerMap rdm(const Matrix<cdouble>& corr, int pad_factor, const RdmGeometry& geometry);

struct CfarConfig {
    double threshold = 20.0;  ///< Gamma, linear power ratio
    int train_cells = 32;
    int guard_cells = 4;
    int temp_radius = 40;  ///< n-bar

    void validate() const;
};

/// Cell-averaging floor along the range axis, cyclic, train cells on each
/// side beyond the guard cells.
Matrix<double> cfar_floor(const Matrix<double>& power, const CfarConfig& cfg);
Matrix<double> cfar_floor(const RangeDopplerMap& map, const CfarConfig& cfg);

struct Detection {
    std::size_t range_bin = 0;
    std::size_t doppler_bin = 0;
    double power = 0.0;
    double ratio = 0.0;  ///< power / floor
    double range_m = 0.0;
    double velocity_mps = 0.0;
};

struct DetectionReport {
    /// In acceptance order (descending peak strength).
    std::vector<Detection> detections;
    /// Strongest range bin with its Doppler argmax, even when rejected.
    Detection peak;
};

/// Target exclusion nearby the main peak: per range bin the Doppler argmax
/// (ties to smaller k); range bins are visited by decreasing |R(n, k_n)|
/// (ties to smaller n); an accepted bin removes the cyclic window
/// [n - n-bar, n + n-bar], a rejected one only itself.
DetectionReport temp_detect(const Matrix<double>& power, const Matrix<double>& floor, const CfarConfig& cfg,
                            const RdmGeometry& geometry);
DetectionReport temp_detect(const RangeDopplerMap& map, const Matrix<double>& floor, const CfarConfig& cfg);

/// d = c0 n T_s / 2.
double estimate_range(std::size_t range_bin, double sample_period_s);
/// u = c0 k / (2 Q0 N f_c T_s), with k - Q0 for k >= Q0 / 2.
double estimate_velocity(std::size_t doppler_bin, std::size_t Q0, std::size_t N, double carrier_hz,
                         double sample_period_s);

/// Strips the CP and cuts the M' N samples into M' blocks of length N.
SubblockSet de_msqp_split(const ComplexSequence& frame_rx, const DeMsQpSpec& spec);

/// Fractional bin position of a target on the map: delay in samples and
/// Doppler in units of Q0 bins.
struct TargetBins {
    double range_bin = 0.0;
    double doppler_bin = 0.0;
};
TargetBins target_bins(const Target& t, const RdmGeometry& g, int upsample_factor);

/// Within `tol` range bins (cyclic mod N) and `tol` Doppler bins (cyclic mod Q0).
bool detection_matches(const Detection& d, const TargetBins& t, const RdmGeometry& g, double tol = 3.0);

namespace serial {

Matrix<cdouble> correlate_subblocks(const SubblockSet& rx, std::span<const cdouble> reference);
RangeDopplerMap rdm(const Matrix<cdouble>& corr, int pad_factor, const RdmGeometry& geometry);
Matrix<double> cfar_floor(const Matrix<double>& power, const CfarConfig& cfg);

}  // namespace serial
}  // namespace jrc
