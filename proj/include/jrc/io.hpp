#pragma once

// File formats: waveform dumps, range-Doppler maps, packed bits and BER rows.
// Every failure throws std::runtime_error naming the path.

#include <cstdint>
#include <string>
#include <vector>

#include "jrc/radar.hpp"
#include "jrc/types.hpp"

namespace jrc::io {

/// Header: uint64 length, float64 sample period; then interleaved float64
/// re, im. All little-endian.
void write_waveform_binary(const std::string& path, const ComplexSequence& x);
ComplexSequence read_waveform_binary(const std::string& path);

/// Columns index,re,im with 17 significant digits.
void write_waveform_csv(const std::string& path, const ComplexSequence& x);

/// Columns n,k,power (|R|^2), row-major in n.
void write_rdm_csv(const std::string& path, const RangeDopplerMap& map);
/// uint64 rows, uint64 cols, then rows*cols float64 |R|^2, row-major.
void write_rdm_binary(const std::string& path, const RangeDopplerMap& map);
Matrix<double> read_rdm_binary(const std::string& path);

/// Eight bits per byte, first bit in the most significant position; the
/// last byte is zero-padded.
std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t nbits);
void write_packed_bits(const std::string& path, const std::vector<std::uint8_t>& bits);

struct BerRow {
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
};
void write_ber_csv(const std::string& path, const std::vector<BerRow>& rows);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace jrc::io
