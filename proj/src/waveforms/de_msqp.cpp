#include "jrc/waveforms/de_msqp.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "jrc/fft.hpp"
#include "jrc/rng.hpp"

namespace jrc {

ComplexSequence time_extend(const ComplexSequence& x, int stream_index, int extension) {
    x.validate("time_extend input");
    require(extension >= 1, "time_extend: extension must be >= 1");
    require(stream_index >= 0 && stream_index < extension, "time_extend: stream index out of range");
    const std::size_t L = x.size();
    CVec out(L * static_cast<std::size_t>(extension));
    for (int g = 0; g < extension; ++g) {
        const long long r = static_cast<long long>(g) * stream_index % extension;
        const cdouble w = r == 0 ? cdouble{1.0, 0.0} : std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / extension);
        for (std::size_t n = 0; n < L; ++n) out[static_cast<std::size_t>(g) * L + n] = w * x[n];
    }
    return {std::move(out), x.sample_period_s};
}

void DeMsQpSpec::validate() const {
    base.validate();
    require(extension >= 1, "de_msqp: extension must be >= 1");
    require(guard_len_ext >= 0, "de_msqp: extended guard length must be non-negative");
    require(cp_len >= 0, "de_msqp: cp length must be non-negative");
    require(cp_len <= frame_len(), "de_msqp: cp longer than the frame");
    constellation.validate();
}

long long DeMsQpSpec::frame_len() const {
    long long n = 0;
    for (std::size_t m = 0; m < base.num_subbands(); ++m) n += ext_subband_len(m) + guard_len_ext;
    return n;
}

std::vector<long long> DeMsQpSpec::ext_offsets() const {
    std::vector<long long> f(base.num_subbands());
    long long acc = 0;
    for (std::size_t m = 0; m < f.size(); ++m) {
        f[m] = acc;
        acc += ext_subband_len(m) + guard_len_ext;
    }
    return f;
}

bool DeMsQpSpec::block_aligned() const { return guard_len_ext == base.guard_len * extension; }

namespace {

void check_data(const DeMsQpSpec& spec, const std::vector<CVec>& data) {
    require(data.size() == spec.num_data_sequences(),
            "de_msqp: expected " + std::to_string(spec.num_data_sequences()) + " data sequences, got " +
                std::to_string(data.size()));
    for (std::size_t m = 0; m < spec.base.num_subbands(); ++m) {
        for (int i = 1; i <= spec.num_streams(); ++i) {
            const auto& s = data[spec.data_index(m, i)];
            require(static_cast<long long>(s.size()) == spec.base.subbands[m].length,
                    "de_msqp: data sequence length must equal the subband length");
            for (const auto& v : s) require(spec.constellation.contains(v), "de_msqp: data symbol not in the constellation");
        }
    }
}

}  // namespace

CVec de_msqp_comb(const DeMsQpSpec& spec, std::size_t m) {
    spec.validate();
    require(m < spec.base.num_subbands(), "de_msqp_comb: subband index out of range");
    const auto& zc = spec.base.subbands[m];
    const CVec B = fft::forward(zc_generate(zc).samples);
    const double Lp = static_cast<double>(spec.ext_subband_len(m));
    const cdouble rot = std::polar(spec.extension / std::sqrt(Lp), spec.base.phases()[m]);
    CVec out(B.size());
    for (std::size_t k = 0; k < B.size(); ++k) out[k] = rot * B[k];
    return out;
}

CVec de_msqp_spectrum(const DeMsQpSpec& spec, const std::vector<CVec>& data, double data_gain) {
    spec.validate();
    check_data(spec, data);
    const int Mp = spec.extension;
    CVec X(static_cast<std::size_t>(spec.frame_len()), cdouble{});
    const auto f = spec.ext_offsets();
    const auto ph = spec.base.phases();
    for (std::size_t m = 0; m < spec.base.num_subbands(); ++m) {
        const auto& zc = spec.base.subbands[m];
        const ComplexSequence b = zc_generate(zc);
        ComplexSequence xm = time_extend(b, 0, Mp);
        for (int i = 1; i < Mp; ++i) {
            const ComplexSequence s = time_extend({data[spec.data_index(m, i)], 1.0}, i, Mp);
            for (std::size_t n = 0; n < xm.size(); ++n) xm[n] += data_gain * s[n];
        }
        const CVec Xm = fft::forward(xm.samples);
        const cdouble rot = std::polar(1.0 / std::sqrt(static_cast<double>(Xm.size())), ph[m]);
        for (std::size_t k = 0; k < Xm.size(); ++k) X[static_cast<std::size_t>(f[m]) + k] = rot * Xm[k];
    }
    return X;
}

double de_msqp_frame_scale(const DeMsQpSpec& spec, double data_gain) {
    return 1.0 / std::sqrt(1.0 + (spec.extension - 1) * data_gain * data_gain);
}

ComplexSequence de_msqp_build(const DeMsQpSpec& spec, const std::vector<CVec>& data, const DeMsQpBuildOptions& options) {
    const CVec X = de_msqp_spectrum(spec, data, options.data_gain);
    CVec body = fft::inverse(X);
    const double scale = de_msqp_frame_scale(spec, options.data_gain) / std::sqrt(static_cast<double>(X.size()));
    const auto cp = static_cast<std::size_t>(spec.cp_len);
    CVec frame(cp + body.size());
    for (std::size_t n = 0; n < cp; ++n) frame[n] = body[body.size() - cp + n] * scale;
    for (std::size_t n = 0; n < body.size(); ++n) frame[cp + n] = body[n] * scale;
    return {std::move(frame), spec.base.sample_period_s};
}

Rational spectral_efficiency_ratio(const DeMsQpSpec& spec) {
    spec.validate();
    const long long M = static_cast<long long>(spec.base.num_subbands());
    const long long Np = spec.frame_len();
    Rational r;
    r.num = (Np - M * spec.guard_len_ext) * (spec.extension - 1) * spec.constellation.bits_per_symbol();
    r.den = (Np + spec.cp_len) * spec.extension;
    const long long g = std::gcd(r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    if (r.num == 0) r.den = 1;
    return r;
}

double spectral_efficiency(const DeMsQpSpec& spec) { return spectral_efficiency_ratio(spec).value(); }

DataPayload random_payload(const DeMsQpSpec& spec, std::uint64_t seed) {
    spec.validate();
    DataPayload p;
    p.symbols.resize(spec.num_data_sequences());
    p.bits.resize(spec.num_data_sequences());
    const auto k = static_cast<std::size_t>(spec.constellation.bits_per_symbol());
    for (std::size_t m = 0; m < spec.base.num_subbands(); ++m) {
        for (int i = 1; i <= spec.num_streams(); ++i) {
            const std::size_t d = spec.data_index(m, i);
            Rng rng(derive_seed(seed, {m, static_cast<std::uint64_t>(i)}));
            std::uniform_int_distribution<int> bit(0, 1);
            auto& bits = p.bits[d];
            bits.resize(static_cast<std::size_t>(spec.base.subbands[m].length) * k);
            for (auto& b : bits) b = static_cast<std::uint8_t>(bit(rng));
            p.symbols[d] = spec.constellation.map(bits);
        }
    }
    return p;
}

}  // namespace jrc
