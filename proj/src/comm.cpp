#include "jrc/comm.hpp"

#include <cmath>

#include "jrc/fft.hpp"

namespace jrc {

ComplexSequence strip_cp(const ComplexSequence& frame_rx, const DeMsQpSpec& spec) {
    const auto cp = static_cast<std::size_t>(spec.cp_len);
    require(frame_rx.size() >= cp, "strip_cp: frame shorter than the cp");
    return {CVec(frame_rx.samples.begin() + static_cast<long long>(cp), frame_rx.samples.end()), frame_rx.sample_period_s};
}

StreamGrid extract_streams(const ComplexSequence& frame_rx, const DeMsQpSpec& spec) {
    spec.validate();
    const auto Np = static_cast<std::size_t>(spec.frame_len());
    require(frame_rx.size() == Np, "extract_streams: frame length must equal N' (cp removed)");
    const CVec Y = fft::forward(frame_rx.samples);
    // undo the synthesis 1/sqrt(N') and the full-payload frame scale
    const double scale = 1.0 / (std::sqrt(static_cast<double>(Np)) * de_msqp_frame_scale(spec));
    const auto f = spec.ext_offsets();
    const int Mp = spec.extension;
    StreamGrid g;
    g.extension = Mp;
    g.bins.resize(spec.base.num_subbands());
    for (std::size_t m = 0; m < g.bins.size(); ++m) {
        const auto L = static_cast<std::size_t>(spec.base.subbands[m].length);
        g.bins[m].assign(static_cast<std::size_t>(Mp), CVec(L));
        for (std::size_t k = 0; k < L; ++k)
            for (int i = 0; i < Mp; ++i)
                g.bins[m][static_cast<std::size_t>(i)][k] =
                    Y[static_cast<std::size_t>(f[m]) + k * static_cast<std::size_t>(Mp) + static_cast<std::size_t>(i)] * scale;
    }
    return g;
}

ChannelEstimate channel_estimate(const StreamGrid& grid, const DeMsQpSpec& spec) {
    spec.validate();
    require(grid.bins.size() == spec.base.num_subbands() && grid.extension == spec.extension,
            "channel_estimate: grid does not match the frame layout");
    const int Mp = spec.extension;
    ChannelEstimate est;
    for (std::size_t m = 0; m < grid.bins.size(); ++m) {
        const CVec comb = de_msqp_comb(spec, m);
        const auto& y0 = grid.bins[m][0];
        const std::size_t L = comb.size();
        std::vector<std::size_t> pos;
        CVec ls;
        for (std::size_t k = 0; k < L; ++k) {
            if (std::abs(comb[k]) < 1e-12) continue;
            pos.push_back(k * static_cast<std::size_t>(Mp));
            ls.push_back(y0[k] / comb[k]);
        }
        require(!pos.empty(), "channel_estimate: no usable comb bins");
        CVec h(L * static_cast<std::size_t>(Mp));
        std::size_t j = 0;
        for (std::size_t b = 0; b < h.size(); ++b) {
            while (j + 1 < pos.size() && pos[j + 1] <= b) ++j;
            if (b <= pos[0]) {
                h[b] = ls[0];
            } else if (j + 1 >= pos.size()) {
                h[b] = ls.back();
            } else {
                const double t = static_cast<double>(b - pos[j]) / static_cast<double>(pos[j + 1] - pos[j]);
                h[b] = (1.0 - t) * ls[j] + t * ls[j + 1];
            }
        }
        est.gains.push_back(std::move(h));
    }
    return est;
}

Demodulated equalize_and_demap(const StreamGrid& grid, const ChannelEstimate& gains, const DeMsQpSpec& spec,
                               const EqualizerOptions& options) {
    spec.validate();
    require(gains.gains.size() == grid.bins.size(), "equalize: gain set does not match the grid");
    const int Mp = spec.extension;
    const auto ph = spec.base.phases();
    Demodulated out;
    out.symbols.resize(spec.num_data_sequences());
    out.decisions.resize(spec.num_data_sequences());
    out.bits.resize(spec.num_data_sequences());
    for (std::size_t m = 0; m < grid.bins.size(); ++m) {
        const auto L = static_cast<std::size_t>(spec.base.subbands[m].length);
        const double Lp = static_cast<double>(spec.ext_subband_len(m));
        require(gains.gains[m].size() == L * static_cast<std::size_t>(Mp), "equalize: gain length mismatch");
        for (int i = 1; i < Mp; ++i) {
            CVec Z(L);
            for (std::size_t k = 0; k < L; ++k)
                Z[k] = grid.bins[m][static_cast<std::size_t>(i)][k] /
                       gains.gains[m][k * static_cast<std::size_t>(Mp) + static_cast<std::size_t>(i)];
            CVec z = fft::inverse(Z);
            const double scale = std::sqrt(Lp) / (static_cast<double>(Mp) * static_cast<double>(L));
            const std::size_t d = spec.data_index(m, i);
            auto& sym = out.symbols[d];
            sym.resize(L);
            for (std::size_t n = 0; n < L; ++n) {
                double rot = -ph[m];
                if (options.phase_ramp) rot += 2.0 * kPi * static_cast<double>(static_cast<long long>(i) * static_cast<long long>(n)) / Lp;
                sym[n] = z[n] * scale * std::polar(1.0, rot);
            }
            auto& dec = out.decisions[d];
            dec.resize(L);
            for (std::size_t n = 0; n < L; ++n) dec[n] = spec.constellation.decide(sym[n]);
            out.bits[d] = spec.constellation.unmap(dec);
        }
    }
    return out;
}

BerReport ber_count(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits) {
    require(tx_bits.size() == rx_bits.size(), "ber_count: length mismatch");
    BerReport r;
    r.bits_total = tx_bits.size();
    for (std::size_t i = 0; i < tx_bits.size(); ++i) r.bits_errored += ((tx_bits[i] ^ rx_bits[i]) & 1u);
    r.ber = r.bits_total ? static_cast<double>(r.bits_errored) / static_cast<double>(r.bits_total) : 0.0;
    return r;
}

BerReport ber_count(const std::vector<std::vector<std::uint8_t>>& tx, const std::vector<std::vector<std::uint8_t>>& rx) {
    require(tx.size() == rx.size(), "ber_count: stream count mismatch");
    BerReport r;
    for (std::size_t s = 0; s < tx.size(); ++s) {
        const BerReport p = ber_count(tx[s], rx[s]);
        r.bits_total += p.bits_total;
        r.bits_errored += p.bits_errored;
    }
    r.ber = r.bits_total ? static_cast<double>(r.bits_errored) / static_cast<double>(r.bits_total) : 0.0;
    return r;
}

}  // namespace jrc
