#include "jrc/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace jrc::io {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream f(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!f) fail(path, "cannot open for writing");
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(path, "cannot open for reading");
    return f;
}

template <class T>
void put(std::ofstream& f, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    f.write(buf, sizeof(T));
}

template <class T>
T get(std::ifstream& f, const std::string& path) {
    char buf[sizeof(T)];
    if (!f.read(buf, sizeof(T))) fail(path, "truncated file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void close(std::ofstream& f, const std::string& path) {
    f.close();
    if (!f) fail(path, "write failed");
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

void write_waveform_binary(const std::string& path, const ComplexSequence& x) {
    auto f = open_out(path, true);
    put<std::uint64_t>(f, x.size());
    put<double>(f, x.sample_period_s);
    for (const auto& v : x.samples) {
        put<double>(f, v.real());
        put<double>(f, v.imag());
    }
    close(f, path);
}

ComplexSequence read_waveform_binary(const std::string& path) {
    auto f = open_in(path);
    const auto n = get<std::uint64_t>(f, path);
    const auto ts = get<double>(f, path);
    f.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::uint64_t>(f.tellg());
    if (bytes != 16 + 16 * n) fail(path, "length header does not match file size");
    f.seekg(16);
    CVec s(n);
    for (auto& v : s) {
        const double re = get<double>(f, path);
        v = {re, get<double>(f, path)};
    }
    return {std::move(s), ts};
}

void write_waveform_csv(const std::string& path, const ComplexSequence& x) {
    auto f = open_out(path, false);
    f << "index,re,im\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        f << i << ',' << format_double(x[i].real()) << ',' << format_double(x[i].imag()) << '\n';
    close(f, path);
}

void write_rdm_csv(const std::string& path, const RangeDopplerMap& map) {
    auto f = open_out(path, false);
    f << "n,k,power\n";
    for (std::size_t n = 0; n < map.N(); ++n)
        for (std::size_t k = 0; k < map.Q0(); ++k) f << n << ',' << k << ',' << format_double(std::norm(map.cells(n, k))) << '\n';
    close(f, path);
}

void write_rdm_binary(const std::string& path, const RangeDopplerMap& map) {
    auto f = open_out(path, true);
    put<std::uint64_t>(f, map.N());
    put<std::uint64_t>(f, map.Q0());
    for (const auto& c : map.cells.data()) put<double>(f, std::norm(c));
    close(f, path);
}

Matrix<double> read_rdm_binary(const std::string& path) {
    auto f = open_in(path);
    const auto rows = get<std::uint64_t>(f, path);
    const auto cols = get<std::uint64_t>(f, path);
    Matrix<double> m(rows, cols);
    for (auto& v : m.data()) v = get<double>(f, path);
    return m;
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1u) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    require(nbits <= bytes.size() * 8, "unpack_bits: not enough bytes");
    std::vector<std::uint8_t> out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    return out;
}

void write_packed_bits(const std::string& path, const std::vector<std::uint8_t>& bits) {
    auto f = open_out(path, true);
    const auto bytes = pack_bits(bits);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    close(f, path);
}

void write_ber_csv(const std::string& path, const std::vector<BerRow>& rows) {
    auto f = open_out(path, false);
    f << "snr_db,bits,errors,ber\n";
    for (const auto& r : rows) f << format_double(r.snr_db) << ',' << r.bits << ',' << r.errors << ',' << format_double(r.ber) << '\n';
    close(f, path);
}

}  // namespace jrc::io
