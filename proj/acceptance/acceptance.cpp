// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jrc/comm.hpp"
#include "jrc/dsp.hpp"
#include "jrc/harness/config.hpp"
#include "jrc/harness/run.hpp"
#include "jrc/radar.hpp"
#include "jrc/waveforms/de_msqp.hpp"
#include "jrc/waveforms/zc.hpp"
#include "oracles.hpp"

using namespace jrc;
namespace h = jrc::harness;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> check;
};

std::string config_dir = JRC_CONFIG_DIR;

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

std::vector<h::ResultRow> run_config(const std::string& file, const std::function<void(h::ExperimentConfig&)>& edit = {}) {
    auto cfg = h::load_config(config_dir + "/" + file);
    if (edit) edit(cfg);
    return h::run(cfg);
}

/// metric value keyed by (series, value)
std::map<std::pair<std::string, double>, double> table(const std::vector<h::ResultRow>& rows, const std::string& metric) {
    std::map<std::pair<std::string, double>, double> t;
    for (const auto& r : rows)
        if (r.metric == metric) t[{r.series, r.value.value_or(0.0)}] = r.metric_value;
    return t;
}

double lookup(const std::vector<h::ResultRow>& rows, const std::string& series, const std::string& metric) {
    for (const auto& r : rows)
        if (r.series == series && r.metric == metric) return r.metric_value;
    throw std::runtime_error("missing row " + series + " / " + metric);
}

// ------------------------------------------------------------------ 1, 2

Outcome perfect_autocorrelation() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const long long L = 2 * std::uniform_int_distribution<long long>(1, 1000)(rng) + 1;
        long long p;
        do p = std::uniform_int_distribution<long long>(1, L - 1)(rng);
        while (std::gcd(p, L) != 1);
        const auto b = zc_generate({L, p});
        const auto r = cyclic_correlate(b, b);
        double off = 0.0;
        for (std::size_t n = 1; n < r.size(); ++n) off = std::max(off, std::abs(r[n]));
        worst = std::max(worst, off / (1e-9 * static_cast<double>(L)));
    }
    return {worst < 1.0, fmt("worst off-peak / (1e-9 L) = %.3g", worst)};
}

Outcome residue_table() {
    const long long L = 10007;
    const auto r = sidelobe_residues({L, 5003}, 0);
    std::vector<long long> got;
    for (long long off : {1, 2, 3, 4}) {
        const long long a = std::llabs(r[static_cast<std::size_t>(mod(off, L))]);
        const long long b = std::llabs(r[static_cast<std::size_t>(mod(-off, L))]);
        if (a != b) return {false, fmt("asymmetric at offset %lld", off)};
        got.push_back(a);
    }
    const std::vector<long long> want{5003, 1, 5002, 2};
    return {got == want, fmt("|R| at 1..4 = %lld %lld %lld %lld", got[0], got[1], got[2], got[3])};
}

// --------------------------------------------------------------------- 3

Outcome root_contrast() {
    const auto rows = run_config("root-design-fig5.json");
    bool designed_ok = true, p3_ok = false;
    std::string detail;
    for (const auto& r : rows) {
        if (r.metric != "far_sidelobe_count") continue;
        const bool p3 = r.series.ends_with(" p=3");
        if (p3) p3_ok = r.metric_value >= 1;
        else designed_ok = designed_ok && r.metric_value == 0;
        detail += fmt("%s: %g far; ", r.series.c_str(), r.metric_value);
    }
    return {designed_ok && p3_ok, detail};
}

// --------------------------------------------------------------------- 4

Outcome false_alarm_trend() {
    const auto rows = run_config("false-alarm-fig10.json");
    const auto fa = table(rows, "false_alarm_rate");
    std::set<double> thresholds;
    std::set<std::string> designed;
    for (const auto& [k, v] : fa) {
        thresholds.insert(k.second);
        if (k.first != "p=3") designed.insert(k.first);
    }
    std::string hits;
    for (double g : thresholds) {
        bool ok = fa.at({"p=3", g}) > 0.1;
        for (const auto& s : designed) ok = ok && fa.at({s, g}) < 1e-2;
        if (ok) hits += fmt(" %g", g);
    }
    if (hits.empty()) return {false, "no threshold separates the designed roots from p=3"};
    return {true, "separating thresholds (dB):" + hits};
}

// --------------------------------------------------------------------- 5

Outcome ranging_bins() {
    const auto rows = run_config("ranging-fig11.json");
    const auto rng_err = table(rows, "mean_range_error_bins");
    const auto vel_err = table(rows, "mean_velocity_error_bins");
    const auto det = table(rows, "detection_rate");
    const std::string ms = "msqp subband-rate", zc = "zc wideband full-rate";
    bool ok = true;
    std::string detail;
    for (const auto& [k, v] : rng_err) {
        if (k.first != ms || k.second < -45.0) continue;
        const double snr = k.second;
        const double r_ms = v, r_zc = rng_err.at({zc, snr});
        const double v_ms = vel_err.at({ms, snr}), v_zc = vel_err.at({zc, snr});
        auto within2 = [](double a, double b) { return a <= 2.0 * b && b <= 2.0 * a; };
        ok = ok && std::max({r_ms, r_zc, v_ms, v_zc}) <= 1.0 && within2(r_ms, r_zc) && within2(v_ms, v_zc);
        detail += fmt("%g dB: range %.3f/%.3f vel %.3f/%.3f bins, detected %.2f/%.2f; ", snr, r_ms, r_zc, v_ms, v_zc,
                      det.at({ms, snr}), det.at({zc, snr}));
    }
    return {ok && !detail.empty(), detail};
}

// --------------------------------------------------------------------- 6

Outcome papr_reduction() {
    const auto rows = run_config("papr.json", [](h::ExperimentConfig& c) {
        std::erase_if(c.waveforms, [](const h::WaveformConfig& w) { return w.kind != "msqp"; });
    });
    const double u = lookup(rows, "msqp", "papr_unrotated_db");
    const double s = lookup(rows, "msqp", "papr_searched_db");
    const double u_os = lookup(rows, "msqp", "papr_unrotated_os_db");
    const double s_os = lookup(rows, "msqp", "papr_searched_os_db");
    const bool ok = u > 11.0 && s <= u - 4.0 && std::abs(u_os - 13.7) <= 1.0 && std::abs(s_os - 6.6) <= 1.0;
    return {ok, fmt("unrotated %.2f dB searched %.2f dB; oversampled %.2f / %.2f dB", u, s, u_os, s_os)};
}

// ------------------------------------------------------------------ 7, 8

DeMsQpSpec random_de(std::mt19937_64& rng, int max_ext, bool aligned) {
    auto pick = [&](long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng); };
    const int M = static_cast<int>(pick(1, 4));
    const long long L = 2 * pick(2, 50) + 1;
    DeMsQpSpec d;
    d.base = make_uniform_msqp(M, L, pick(0, 5), 0);
    std::vector<double> ph;
    for (int m = 0; m < M; ++m) ph.push_back(d.base.phase_alphabet[static_cast<std::size_t>(pick(0, 3))]);
    d.base.chosen_phases = ph;
    d.extension = static_cast<int>(pick(1, max_ext));
    d.guard_len_ext = aligned ? d.base.guard_len * d.extension : pick(0, 20);
    d.cp_len = pick(0, 16);
    return d;
}

Outcome orthogonality() {
    std::mt19937_64 rng(707);
    double leak = 0.0;
    std::uint64_t bits = 0, errors = 0;
    for (int t = 0; t < 20; ++t) {
        const DeMsQpSpec d = random_de(rng, 4, true);
        const auto pay = random_payload(d, static_cast<std::uint64_t>(t) + 1);
        const auto other = random_payload(d, static_cast<std::uint64_t>(t) + 1000);
        const auto base_grid = extract_streams(strip_cp(de_msqp_build(d, pay.symbols), d), d);
        for (std::size_t m = 0; m < d.base.num_subbands(); ++m)
            leak = std::max(leak, oracle::max_abs_diff(base_grid.bins[m][0], de_msqp_comb(d, m)));
        // swapping the symbols of stream s may only change the bins of stream s
        for (int s = 1; s <= d.num_streams(); ++s) {
            std::vector<CVec> swapped = pay.symbols;
            for (std::size_t m = 0; m < d.base.num_subbands(); ++m) swapped[d.data_index(m, s)] = other.symbols[d.data_index(m, s)];
            const auto grid = extract_streams(strip_cp(de_msqp_build(d, swapped), d), d);
            for (std::size_t m = 0; m < d.base.num_subbands(); ++m)
                for (int i = 0; i <= d.num_streams(); ++i)
                    if (i != s)
                        leak = std::max(leak, oracle::max_abs_diff(grid.bins[m][static_cast<std::size_t>(i)],
                                                                   base_grid.bins[m][static_cast<std::size_t>(i)]));
        }
        const auto dem = equalize_and_demap(base_grid, channel_estimate(base_grid, d), d);
        const auto rep = ber_count(pay.bits, dem.bits);
        bits += rep.bits_total;
        errors += rep.bits_errored;
    }
    return {leak < 1e-12 && errors == 0,
            fmt("max leakage %.2e, %llu bit errors over %llu bits", leak, static_cast<unsigned long long>(errors),
                static_cast<unsigned long long>(bits))};
}

Outcome efficiency_counting() {
    std::mt19937_64 rng(808);
    int matched = 0;
    std::string first_bad;
    for (int t = 0; t < 20; ++t) {
        const DeMsQpSpec d = random_de(rng, 8, false);
        const auto pay = random_payload(d, static_cast<std::uint64_t>(t) + 50);
        const CVec all = de_msqp_spectrum(d, pay.symbols);
        const CVec sensing = de_msqp_spectrum(d, pay.symbols, 0.0);
        long long occupied = 0;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (std::abs(all[k] - sensing[k]) > 1e-9) ++occupied;
        long long num = occupied * d.constellation.bits_per_symbol();
        long long den = d.frame_len() + d.cp_len;
        const long long g = std::gcd(num, den);
        if (g > 0) {
            num /= g;
            den /= g;
        } else {
            den = 1;
        }
        const Rational want{num, den};
        if (spectral_efficiency_ratio(d) == want) ++matched;
        else if (first_bad.empty()) first_bad = fmt(" (config %d: counted %lld/%lld)", t, num, den);
    }
    return {matched == 20, fmt("%d/20 exact matches", matched) + first_bad};
}

// --------------------------------------------------------------------- 9

Outcome xcorr_bound() {
    const auto rows = run_config("xcorr-appendix.json");
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        if (r.metric != "max_lag_mean_abs_r") continue;
        const double root = lookup(rows, r.series, "sqrt_n");
        ok = ok && r.metric_value <= root;
        detail += fmt("%s: max mean|r| %.2f vs sqrt N %.2f; ", r.series.c_str(), r.metric_value, root);
    }
    return {ok && !detail.empty(), detail};
}

// -------------------------------------------------------------------- 10

Outcome tradeoff_threshold() {
    const auto rows = run_config("tradeoff-fig13-14.json");
    const auto rng_err = table(rows, "mean_range_error_bins");
    const auto vel_err = table(rows, "mean_velocity_error_bins");
    std::map<double, std::vector<std::pair<double, double>>> curves;  // snr -> (M', worst error)
    for (const auto& r : rows) {
        if (r.metric != "mean_range_error_bins") continue;
        const auto pos = r.series.find("snr_db=");
        const double snr = std::stod(r.series.substr(pos + 7));
        const double e = std::max(rng_err.at({r.series, *r.value}), vel_err.at({r.series, *r.value}));
        curves[snr].emplace_back(*r.value, e);
    }
    if (curves.size() < 2) return {false, "need two SNR series"};
    std::vector<double> knees;
    std::string detail;
    bool ok = true;
    for (auto& [snr, pts] : curves) {
        std::sort(pts.begin(), pts.end());
        std::size_t flat = 0;
        while (flat < pts.size() && pts[flat].second <= 1.0) ++flat;
        bool degrades = flat > 0;
        for (std::size_t i = flat; i < pts.size(); ++i) degrades = degrades && pts[i].second > 1.0;
        ok = ok && degrades;
        const double knee = flat > 0 ? pts[flat - 1].first : 0.0;
        knees.push_back(knee);
        detail += fmt("%g dB: M'*=%g [", snr, knee);
        for (const auto& [m, e] : pts) detail += fmt(" %g:%.2f", m, e);
        detail += " ]; ";
    }
    for (std::size_t i = 1; i < knees.size(); ++i) ok = ok && knees[i] > knees[i - 1];
    // reference thresholds 4 (low SNR) and 10 (high SNR), one sweep point of slack
    const std::set<double> low_ok{2, 4, 8}, high_ok{4, 8, 16};
    ok = ok && low_ok.count(knees.front()) && high_ok.count(knees.back());
    return {ok, detail};
}

// -------------------------------------------------------------------- 11

Outcome oracle_equivalence() {
    double worst = 0.0;
    for (std::size_t N = 1; N <= 256; ++N) {
        const CVec y = oracle::random_cvec(N, 2 * N), x = oracle::random_cvec(N, 2 * N + 1);
        const auto fast = cyclic_correlate({y, 1.0}, {x, 1.0});
        const CVec direct = oracle::correlate(y, x);
        worst = std::max(worst, oracle::max_abs_diff(fast.samples, direct) / oracle::max_abs(direct));
    }
    double cfar_dev = 0.0;
    std::mt19937_64 rng(1111);
    for (double var : {0.5, 1.0, 3.0, 40.0}) {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5 * var));
        Matrix<double> p(500, 40);
        for (auto& v : p.data()) {
            const double a = g(rng), b = g(rng);
            v = a * a + b * b;
        }
        const auto fl = cfar_floor(p, CfarConfig{});
        const double mean = std::accumulate(fl.data().begin(), fl.data().end(), 0.0) / static_cast<double>(fl.data().size());
        cfar_dev = std::max(cfar_dev, std::abs(mean / var - 1.0));
    }
    return {worst < 1e-9 && cfar_dev < 0.02,
            fmt("correlation rel. error %.2e over N=1..256; CFAR floor bias %.2f%%", worst, 100.0 * cfar_dev)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jrc acceptance suite"};
    std::vector<int> only, known;
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--known-failure", known, "Criteria reported but excluded from the exit status");
    app.add_option("--configs", config_dir, "Scenario config directory");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "perfect autocorrelation", 10, perfect_autocorrelation},
        {2, "Doppler residue table", 1, residue_table},
        {3, "root design sidelobe contrast", 30, root_contrast},
        {4, "false-alarm trend", 600, false_alarm_trend},
        {5, "range and velocity error", 900, ranging_bins},
        {6, "PAPR reduction", 300, papr_reduction},
        {7, "DE-MS-QP orthogonality", 60, orthogonality},
        {8, "spectral efficiency", 1, efficiency_counting},
        {9, "cross-correlation bound", 120, xcorr_bound},
        {10, "extension tradeoff", 1200, tradeoff_threshold},
        {11, "fast vs direct kernels", 60, oracle_equivalence},
    };

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt(" runtime over the %.0f s budget", c.budget_s);
        }
        const bool excused = std::find(known.begin(), known.end(), c.id) != known.end();
        std::printf("criterion %2d %-30s %s  %.1fs  %s\n", c.id, c.name.c_str(),
                    o.pass ? "PASS" : excused ? "FAIL (known)" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass || excused ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
