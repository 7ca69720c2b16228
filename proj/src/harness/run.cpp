#include "jrc/harness/run.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jrc/comm.hpp"
#include "jrc/dsp.hpp"
#include "jrc/harness/sensing.hpp"
#include "jrc/rng.hpp"
#include "jrc/waveforms/phase_search.hpp"

namespace jrc::harness {
namespace {

template <class F>
auto run_trials(std::uint64_t n, F&& f) {
    using R = decltype(f(std::uint64_t{0}));
    std::vector<R> out(n);
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < static_cast<long long>(n); ++t) out[static_cast<std::size_t>(t)] = f(static_cast<std::uint64_t>(t));
    return out;
}

struct Stats {
    double mean = 0.0;
    double half_width = 0.0;  // 1.96 standard errors
};

Stats stats(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    const double n = static_cast<double>(v.size());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.half_width = 1.96 * std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

class RowSink {
public:
    RowSink(const ExperimentConfig& c, std::vector<ResultRow>& rows) : cfg_(c), rows_(rows) {}

    void add(const std::string& series, const std::string& variable, std::optional<double> value, const std::string& metric,
             double metric_value, std::optional<double> ci, std::uint64_t trials) {
        rows_.push_back({scenario_name(cfg_.scenario), series, variable, value, metric, metric_value, ci, trials, cfg_.base_seed});
    }

    void rate(const std::string& series, const std::string& variable, std::optional<double> value, const std::string& metric,
              std::uint64_t hits, std::uint64_t n) {
        add(series, variable, value, metric, static_cast<double>(hits) / static_cast<double>(n), rate_half_width(n), n);
    }

    void mean(const std::string& series, const std::string& variable, std::optional<double> value, const std::string& metric,
              const std::vector<double>& v) {
        const Stats s = stats(v);
        add(series, variable, value, metric, s.mean, s.half_width, v.size());
    }

private:
    const ExperimentConfig& cfg_;
    std::vector<ResultRow>& rows_;
};

MsQpSpec plain_spec(const WaveformConfig& w) {
    return make_uniform_msqp(w.subbands, w.subband_len, w.guard_len, w.root.resolve(w.subband_len), w.sample_period_s);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void report(const Progress& p, const std::string& s) {
    if (p) p(s);
}

// ---------------------------------------------------------------- papr

void run_papr(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    for (const auto& w : c.waveforms) {
        if (w.kind == "zc" || w.kind == "lfm") {
            const auto chain = make_chain(w);
            out.add(w.label, "", std::nullopt, "papr_db", papr_db(chain.tx), std::nullopt, 1);
            continue;
        }
        // the *_os_db rows measure the waveform interpolated by the channel
        // upsample factor, a proxy for the analog peak between samples
        const int F = c.channel.upsample_factor;
        auto papr_os = [&](const ComplexSequence& x) { return papr_db(upsample_filter(x, F, Boundary::cyclic)); };
        MsQpSpec spec = plain_spec(w);
        const auto x0 = msqp_build(spec);
        out.add(w.label, "", std::nullopt, "papr_unrotated_db", papr_db(x0), std::nullopt, 1);
        out.add(w.label, "", std::nullopt, "papr_unrotated_os_db", papr_os(x0), std::nullopt, 1);
        PhaseSearchOptions opt;
        opt.budget = c.search_budget;
        opt.seed = c.base_seed;
        const auto res = phase_rotation_search(spec, opt);
        out.add(w.label, "", std::nullopt, "papr_searched_db", res.papr_db, std::nullopt, 1);
        MsQpSpec searched = spec;
        searched.chosen_phases = res.phases;
        out.add(w.label, "", std::nullopt, "papr_searched_os_db", papr_os(msqp_build(searched)), std::nullopt, 1);
        out.add(w.label, "", std::nullopt, "search_evaluated", static_cast<double>(res.evaluated), std::nullopt, 1);
        out.add(w.label, "", std::nullopt, "search_exhaustive", res.exhaustive ? 1.0 : 0.0, std::nullopt, 1);
        if (w.kind == "de-msqp") {
            DeMsQpSpec d;
            d.base = searched;
            d.extension = w.extension;
            d.guard_len_ext = w.guard_len_ext.value_or(w.guard_len * w.extension);
            d.cp_len = w.cp_len;
            const auto paprs = run_trials(c.trials, [&](std::uint64_t t) {
                return papr_db(de_msqp_build(d, random_payload(d, derive_seed(c.base_seed, {t})).symbols));
            });
            out.mean(w.label, "", std::nullopt, "papr_frame_db", paprs);
        }
        report(progress, w.label);
    }
}

// ---------------------------------------------------------- root design

void run_root_design(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    const auto& p = c.profile;
    for (const auto& w : c.waveforms) {
        const MsQpSpec spec = plain_spec(w);
        const auto prof = doppler_profile(spec, 0, p.vl);
        const long long L = static_cast<long long>(prof.size());
        const auto peak = static_cast<long long>(std::max_element(prof.begin(), prof.end()) - prof.begin());
        const double ref = prof[static_cast<std::size_t>(peak)];
        double near = 0.0, far = 0.0;
        std::uint64_t far_count = 0;
        const double level = ref * std::pow(10.0, p.level_db / 20.0);
        for (long long n = 0; n < L; ++n) {
            const long long d0 = mod(n - peak, L);
            const long long dist = std::min(d0, L - d0);
            if (dist == 0) continue;
            const double v = prof[static_cast<std::size_t>(n)];
            if (dist <= p.distance) {
                near = std::max(near, v);
            } else {
                far = std::max(far, v);
                if (v >= level) ++far_count;
            }
        }
        auto db = [&](double v) { return v > 0.0 ? 20.0 * std::log10(v / ref) : -400.0; };
        const std::string series = w.label + " p=" + std::to_string(w.root.resolve(w.subband_len));
        out.add(series, "vl", p.vl, "peak_lag", static_cast<double>(std::min(peak, L - peak)), std::nullopt, 1);
        out.add(series, "vl", p.vl, "near_sidelobe_db", db(near), std::nullopt, 1);
        out.add(series, "vl", p.vl, "far_sidelobe_db", db(far), std::nullopt, 1);
        out.add(series, "vl", p.vl, "far_sidelobe_count", static_cast<double>(far_count), std::nullopt, 1);
        report(progress, series);
    }
}

// --------------------------------------------------------- false alarm

void run_false_alarm(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    const auto& th = c.sweep.threshold_db;
    for (const auto& w : c.waveforms) {
        const auto chain = make_chain(w, c.search_budget, c.base_seed);
        struct Outcome {
            std::vector<char> fa, hit;
        };
        const auto res = run_trials(c.trials, [&](std::uint64_t t) {
            const Target tgt = draw_target(c.channel, derive_seed(c.base_seed, {t, 1}));
            const auto ch = channel_config(c.channel, chain.sample_period_s, c.channel.snr_db, {tgt});
            const auto m = sense(chain, ch, c.cfar.to_config(), c.cpi.Q, c.cpi.w, derive_seed(c.base_seed, {t, 2}));
            Outcome o;
            for (double g : th) {
                CfarConfig cf = c.cfar.to_config();
                cf.threshold = std::pow(10.0, g / 10.0);
                const auto rep = temp_detect(m.power, m.floor, cf, m.geometry);
                o.fa.push_back(has_false_alarm(rep, {tgt}, m.geometry, c.channel.upsample_factor));
                bool hit = false;
                for (const auto& d : rep.detections)
                    hit = hit || detection_matches(d, target_bins(tgt, m.geometry, c.channel.upsample_factor), m.geometry);
                o.hit.push_back(hit);
            }
            return o;
        });
        for (std::size_t i = 0; i < th.size(); ++i) {
            std::uint64_t fa = 0, hit = 0;
            for (const auto& o : res) {
                fa += static_cast<std::uint64_t>(o.fa[i]);
                hit += static_cast<std::uint64_t>(o.hit[i]);
            }
            out.rate(w.label, "threshold_db", th[i], "false_alarm_rate", fa, c.trials);
            out.rate(w.label, "threshold_db", th[i], "detection_rate", hit, c.trials);
        }
        report(progress, w.label);
    }
}

// ------------------------------------------------- ranging / velocity

struct ErrorSample {
    double range_m = 0.0, velocity_mps = 0.0, range_bins = 0.0, velocity_bins = 0.0;
    bool detected = false;
};

ErrorSample sensing_trial(const ExperimentConfig& c, const SensingChain& chain, std::optional<double> snr, std::uint64_t t,
                          std::uint64_t noise_seed) {
    const Target tgt = draw_target(c.channel, derive_seed(c.base_seed, {t, 1}));
    const auto ch = channel_config(c.channel, chain.sample_period_s, snr, {tgt});
    const CfarConfig cf = c.cfar.to_config();
    const auto m = sense(chain, ch, cf, c.cpi.Q, c.cpi.w, noise_seed);
    const Estimate e = estimate(temp_detect(m.power, m.floor, cf, m.geometry));
    ErrorSample s;
    s.detected = e.detected;
    s.range_m = std::abs(e.range_m - tgt.range_m);
    s.velocity_mps = std::abs(e.velocity_mps - tgt.velocity_mps);
    s.range_bins = s.range_m / range_bin_m(m.geometry);
    s.velocity_bins = s.velocity_mps / velocity_bin_mps(m.geometry);
    return s;
}

void add_error_rows(RowSink& out, const std::string& series, const std::string& var, double value,
                    const std::vector<ErrorSample>& res, bool range_first) {
    std::vector<double> r, v, rb, vb;
    std::uint64_t det = 0;
    for (const auto& s : res) {
        r.push_back(s.range_m);
        v.push_back(s.velocity_mps);
        rb.push_back(s.range_bins);
        vb.push_back(s.velocity_bins);
        det += s.detected ? 1 : 0;
    }
    auto range_rows = [&] {
        out.mean(series, var, value, "mean_range_error_m", r);
        out.mean(series, var, value, "mean_range_error_bins", rb);
    };
    auto vel_rows = [&] {
        out.mean(series, var, value, "mean_velocity_error_mps", v);
        out.mean(series, var, value, "mean_velocity_error_bins", vb);
    };
    if (range_first) {
        range_rows();
        vel_rows();
    } else {
        vel_rows();
        range_rows();
    }
    out.rate(series, var, value, "detection_rate", det, res.size());
}

void run_estimation(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    std::vector<std::optional<double>> snrs;
    for (double s : c.sweep.snr_db) snrs.emplace_back(s);
    if (snrs.empty()) snrs.push_back(c.channel.snr_db);
    for (std::size_t wi = 0; wi < c.waveforms.size(); ++wi) {
        const auto& w = c.waveforms[wi];
        const auto chain = make_chain(w, c.search_budget, c.base_seed);
        for (std::size_t si = 0; si < snrs.size(); ++si) {
            const auto res = run_trials(c.trials, [&](std::uint64_t t) {
                return sensing_trial(c, chain, snrs[si], t, derive_seed(c.base_seed, {t, 2, wi, si}));
            });
            const double value = snrs[si].value_or(INFINITY);
            add_error_rows(out, w.label, "snr_db", value, res, c.scenario != Scenario::velocity);
            report(progress, w.label + " snr_db=" + fmt(value));
        }
    }
}

// ------------------------------------------------------------ tradeoff

void run_tradeoff(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    std::vector<std::optional<double>> snrs;
    for (double s : c.sweep.snr_db) snrs.emplace_back(s);
    if (snrs.empty()) snrs.push_back(c.channel.snr_db);
    for (std::size_t wi = 0; wi < c.waveforms.size(); ++wi) {
        for (std::size_t si = 0; si < snrs.size(); ++si) {
            const std::string series =
                c.waveforms[wi].label + (snrs[si] ? " snr_db=" + fmt(*snrs[si]) : std::string(" noiseless"));
            for (std::size_t ei = 0; ei < c.sweep.extension.size(); ++ei) {
                WaveformConfig w = c.waveforms[wi];
                w.kind = "de-msqp";
                w.extension = c.sweep.extension[ei];
                w.guard_len_ext = w.guard_len * w.extension;
                w.cp_len = 0;
                const auto chain = make_chain(w, c.search_budget, c.base_seed);
                const auto res = run_trials(c.trials, [&](std::uint64_t t) {
                    return sensing_trial(c, chain, snrs[si], t, derive_seed(c.base_seed, {t, 3, wi, si, ei}));
                });
                const double M = static_cast<double>(w.extension);
                add_error_rows(out, series, "extension", M, res, true);
                out.add(series, "extension", M, "spectral_efficiency", spectral_efficiency(*chain.frame), std::nullopt, 1);
                report(progress, series + " extension=" + fmt(M));
            }
        }
    }
}

// --------------------------------------------------------------- xcorr

void run_xcorr(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    const auto qpsk = Constellation::qpsk();
    for (std::size_t wi = 0; wi < c.waveforms.size(); ++wi) {
        const auto& w = c.waveforms[wi];
        ComplexSequence x = msqp_build(plain_spec(w));
        const double scale = 1.0 / std::sqrt(mean_power(x.view()));
        for (auto& v : x.samples) v *= scale;
        const std::size_t N = x.size();
        const CyclicCorrelator corr(x.samples);
        // fixed chunks summed in order keep the result thread-count independent
        const std::uint64_t chunks = std::min<std::uint64_t>(64, c.trials);
        std::vector<std::vector<double>> part(chunks, std::vector<double>(N, 0.0));
#pragma omp parallel for schedule(dynamic)
        for (long long k = 0; k < static_cast<long long>(chunks); ++k) {
            CVec s(N), r(N);
            for (std::uint64_t t = static_cast<std::uint64_t>(k); t < c.trials; t += chunks) {
                Rng rng(derive_seed(c.base_seed, {wi, t}));
                std::uniform_int_distribution<std::size_t> pick(0, qpsk.size() - 1);
                for (auto& v : s) v = qpsk.points[pick(rng)];
                corr.correlate(s, r);
                auto& acc = part[static_cast<std::size_t>(k)];
                for (std::size_t n = 0; n < N; ++n) acc[n] += std::abs(r[n]);
            }
        }
        std::vector<double> mean(N, 0.0);
        for (const auto& p : part)
            for (std::size_t n = 0; n < N; ++n) mean[n] += p[n];
        for (auto& v : mean) v /= static_cast<double>(c.trials);
        const double mx = *std::max_element(mean.begin(), mean.end());
        const double avg = std::accumulate(mean.begin(), mean.end(), 0.0) / static_cast<double>(N);
        const double root = std::sqrt(static_cast<double>(N));
        const double Nd = static_cast<double>(N);
        out.add(w.label, "N", Nd, "max_lag_mean_abs_r", mx, std::nullopt, c.trials);
        out.add(w.label, "N", Nd, "avg_lag_mean_abs_r", avg, std::nullopt, c.trials);
        out.add(w.label, "N", Nd, "sqrt_n", root, std::nullopt, c.trials);
        out.add(w.label, "N", Nd, "max_over_sqrt_n", mx / root, std::nullopt, c.trials);
        report(progress, w.label);
    }
}

// -------------------------------------------------------------- loopback

void run_loopback(const ExperimentConfig& c, RowSink& out, const Progress& progress) {
    std::vector<std::optional<double>> points;
    for (double e : c.sweep.ebn0_db) points.emplace_back(e);
    if (points.empty()) points.push_back(std::nullopt);
    for (std::size_t wi = 0; wi < c.waveforms.size(); ++wi) {
        const auto& w = c.waveforms[wi];
        DeMsQpSpec d;
        d.base = plain_spec(w);
        if (w.phase_search) {
            PhaseSearchOptions opt;
            opt.budget = c.search_budget;
            opt.seed = c.base_seed;
            d.base.chosen_phases = phase_rotation_search(d.base, opt).phases;
        }
        d.extension = w.extension;
        d.guard_len_ext = w.guard_len_ext.value_or(w.guard_len * w.extension);
        d.cp_len = w.cp_len;
        d.validate();
        const int k = d.constellation.bits_per_symbol();
        for (std::size_t pi = 0; pi < points.size(); ++pi) {
            const auto res = run_trials(c.trials, [&](std::uint64_t t) {
                const auto pay = random_payload(d, derive_seed(c.base_seed, {wi, pi, t, 1}));
                auto frame = de_msqp_build(d, pay.symbols);
                if (points[pi]) {
                    const double ebn0 = std::pow(10.0, *points[pi] / 10.0);
                    add_noise(frame.samples, 1.0 / (static_cast<double>(k) * ebn0), derive_seed(c.base_seed, {wi, pi, t, 2}));
                }
                const auto grid = extract_streams(strip_cp(frame, d), d);
                const auto dem = equalize_and_demap(grid, channel_estimate(grid, d), d);
                return ber_count(pay.bits, dem.bits);
            });
            std::uint64_t bits = 0, errs = 0;
            for (const auto& r : res) {
                bits += r.bits_total;
                errs += r.bits_errored;
            }
            const double value = points[pi].value_or(INFINITY);
            out.rate(w.label, "ebn0_db", value, "ber", errs, bits);
            out.add(w.label, "ebn0_db", value, "bits", static_cast<double>(bits), std::nullopt, c.trials);
            out.add(w.label, "ebn0_db", value, "errors", static_cast<double>(errs), std::nullopt, c.trials);
            if (points[pi] && k == 2) {
                const double ebn0 = std::pow(10.0, *points[pi] / 10.0);
                out.add(w.label, "ebn0_db", value, "qpsk_theory_ber", 0.5 * std::erfc(std::sqrt(ebn0)), std::nullopt, 1);
            }
            report(progress, w.label + " ebn0_db=" + fmt(value));
        }
        out.add(w.label, "", std::nullopt, "spectral_efficiency", spectral_efficiency(d), std::nullopt, 1);
    }
}

}  // namespace

double rate_half_width(std::uint64_t n) {
    require(n >= 1, "rate_half_width: n must be >= 1");
    return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(n)));
}

std::vector<ResultRow> run(const ExperimentConfig& config, const Progress& progress) {
    validate(config);
    const ExperimentConfig c = apply_scale(config);
    std::vector<ResultRow> rows;
    RowSink out(c, rows);
    switch (c.scenario) {
        case Scenario::papr: run_papr(c, out, progress); break;
        case Scenario::root_design: run_root_design(c, out, progress); break;
        case Scenario::false_alarm: run_false_alarm(c, out, progress); break;
        case Scenario::ranging:
        case Scenario::velocity: run_estimation(c, out, progress); break;
        case Scenario::tradeoff: run_tradeoff(c, out, progress); break;
        case Scenario::xcorr: run_xcorr(c, out, progress); break;
        case Scenario::loopback_ber: run_loopback(c, out, progress); break;
    }
    return rows;
}

}  // namespace jrc::harness
