#include "jrc/harness/sensing.hpp"

#include <cmath>

#include "jrc/dsp.hpp"
#include "jrc/rng.hpp"
#include "jrc/waveforms/lfm.hpp"
#include "jrc/waveforms/phase_search.hpp"
#include "jrc/waveforms/zc.hpp"

namespace jrc::harness {
namespace {

MsQpSpec base_spec(const WaveformConfig& w, std::uint64_t budget, std::uint64_t seed) {
    MsQpSpec s = make_uniform_msqp(w.subbands, w.subband_len, w.guard_len, w.root.resolve(w.subband_len), w.sample_period_s);
    if (w.phase_search) {
        PhaseSearchOptions opt;
        opt.budget = budget;
        opt.seed = seed;
        s.chosen_phases = phase_rotation_search(s, opt).phases;
    }
    return s;
}

}  // namespace

SensingChain make_chain(const WaveformConfig& w, std::uint64_t search_budget, std::uint64_t seed) {
    SensingChain c;
    c.label = w.label;
    c.sample_period_s = w.sample_period_s;
    if (w.kind == "msqp" || w.kind == "de-msqp") {
        const MsQpSpec base = base_spec(w, search_budget, seed);
        const auto x = msqp_build(base);
        c.reference = x.samples;
        if (w.sampling == "subband") c.subband = base;
        if (w.kind == "de-msqp") {
            DeMsQpSpec d;
            d.base = base;
            d.extension = w.extension;
            d.guard_len_ext = w.guard_len_ext.value_or(w.guard_len * w.extension);
            d.cp_len = w.cp_len;
            d.validate();
            require(d.block_aligned(), "sensing needs guard_len_ext = extension * guard_len");
            c.frame = d;
            c.blocks_per_unit = w.extension;
        } else {
            c.tx = x;
        }
    } else if (w.kind == "zc") {
        c.tx = zc_generate({w.zc_len, w.root.resolve(w.zc_len)}, w.sample_period_s);
        c.reference = c.tx.samples;
    } else if (w.kind == "lfm") {
        c.tx = lfm_generate({w.lfm_bandwidth_hz, w.lfm_duration_s, w.sample_period_s});
        c.reference = c.tx.samples;
    } else {
        invalid("unknown waveform kind '" + w.kind + "'");
    }
    return c;
}

Target draw_target(const ChannelSection& ch, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Target t;
    t.range_m = ch.range_min_m + (ch.range_max_m - ch.range_min_m) * u01(rng);
    t.velocity_mps = ch.velocity_min_mps + (ch.velocity_max_mps - ch.velocity_min_mps) * u01(rng);
    t.gain = std::polar(1.0, 2.0 * kPi * u01(rng));
    return t;
}

ChannelConfig channel_config(const ChannelSection& ch, double sample_period_s, std::optional<double> snr_db,
                             const std::vector<Target>& targets) {
    ChannelConfig c;
    c.carrier_hz = ch.carrier_hz;
    c.sample_period_s = sample_period_s;
    c.snr_db = snr_db;
    c.upsample_factor = ch.upsample_factor;
    c.impairments.iq_amp = ch.iq_amp;
    c.impairments.iq_phase_rad = ch.iq_phase_deg * kPi / 180.0;
    c.impairments.pn_sigma_rad = ch.pn_sigma_deg * kPi / 180.0;
    c.impairments.pn_initial = ch.pn_initial;
    c.targets = targets;
    return c;
}

SensedMap sense(const SensingChain& chain, const ChannelConfig& ch, const CfarConfig& cfar, int Q, int w,
                std::uint64_t seed) {
    require(Q >= 1 && Q % chain.blocks_per_unit == 0, "sense: Q must be a multiple of the extension");
    const std::size_t N = chain.N();
    const int units = Q / chain.blocks_per_unit;
    SubblockSet set;
    set.fft_pad = w;
    set.blocks.reserve(static_cast<std::size_t>(Q));
    if (chain.frame) {
        const auto& d = *chain.frame;
        for (int u = 0; u < units; ++u) {
            const auto uu = static_cast<std::uint64_t>(u);
            const auto pay = random_payload(d, derive_seed(seed, {uu, 7}));
            const EchoSynthesizer syn(de_msqp_build(d, pay.symbols), ch);
            auto split = de_msqp_split(syn.block(u, derive_seed(seed, {uu})).samples, d);
            for (auto& b : split.blocks) set.blocks.push_back(std::move(b));
        }
    } else {
        const EchoSynthesizer syn(chain.tx, ch);
        for (int q = 0; q < Q; ++q) set.blocks.push_back(syn.block(q, derive_seed(seed, {static_cast<std::uint64_t>(q)})).samples.samples);
    }
    if (chain.subband) {
        for (auto& b : set.blocks) b = subband_receive({std::move(b), chain.sample_period_s}, *chain.subband).samples;
    }
    RdmGeometry g;
    g.sample_period_s = chain.sample_period_s;
    g.carrier_hz = ch.carrier_hz;
    const auto map = rdm(correlate_subblocks(set, chain.reference), w, g);
    SensedMap out{map.power(), {}, map.geometry};
    out.floor = cfar_floor(out.power, cfar);
    require(out.geometry.N == N, "sense: map size mismatch");
    return out;
}

Estimate estimate(const DetectionReport& rep) {
    Estimate e;
    e.detected = !rep.detections.empty();
    const Detection& d = e.detected ? rep.detections.front() : rep.peak;
    e.range_m = d.range_m;
    e.velocity_mps = d.velocity_mps;
    return e;
}

bool has_false_alarm(const DetectionReport& rep, const std::vector<Target>& targets, const RdmGeometry& g,
                     int upsample_factor) {
    for (const auto& d : rep.detections) {
        bool matched = false;
        for (const auto& t : targets) matched = matched || detection_matches(d, target_bins(t, g, upsample_factor), g);
        if (!matched) return true;
    }
    return false;
}

double range_bin_m(const RdmGeometry& g) { return kSpeedOfLight * g.sample_period_s / 2.0; }

double velocity_bin_mps(const RdmGeometry& g) { return estimate_velocity(1, g.Q0, g.N, g.carrier_hz, g.sample_period_s); }

std::vector<double> doppler_profile(const MsQpSpec& spec, std::size_t m, double vl) {
    const ComplexSequence x = subsequence_extract(spec, m);
    const double N = static_cast<double>(x.size());
    ComplexSequence y = x;
    for (std::size_t n = 0; n < y.size(); ++n) y[n] *= std::polar(1.0, 2.0 * kPi * vl * static_cast<double>(n) / N);
    const CVec low = subband_sample(y.samples, spec)[m];
    const CVec ref = subband_sample(x.samples, spec)[m];
    const auto r = cyclic_correlate({low, 1.0}, {ref, 1.0});
    std::vector<double> mag(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) mag[i] = std::abs(r[i]);
    return mag;
}

}  // namespace jrc::harness
