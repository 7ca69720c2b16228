#include "jrc/waveforms/msqp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jrc/fft.hpp"

namespace jrc {

std::vector<double> default_phase_alphabet() { return {0.0, kPi / 2, kPi, 3 * kPi / 2}; }

long long MsQpSpec::total_len() const {
    long long n = 0;
    for (const auto& b : subbands) n += b.length + guard_len;
    return n;
}

std::vector<long long> MsQpSpec::offsets() const {
    std::vector<long long> f(subbands.size());
    long long acc = 0;
    for (std::size_t m = 0; m < subbands.size(); ++m) {
        f[m] = acc;
        acc += subbands[m].length + guard_len;
    }
    return f;
}

std::vector<double> MsQpSpec::phases() const {
    return chosen_phases ? *chosen_phases : std::vector<double>(subbands.size(), 0.0);
}

void MsQpSpec::validate() const {
    require(!subbands.empty(), "msqp: at least one subband required");
    require(guard_len >= 0, "msqp: guard length must be non-negative");
    require(sample_period_s > 0.0, "msqp: sample period must be positive");
    for (const auto& b : subbands) b.validate();
    const auto f = offsets();
    for (std::size_t m = 1; m < f.size(); ++m) {
        require(f[m] >= f[m - 1] + subbands[m - 1].length, "msqp: overlapping subbands");
    }
    require(!phase_alphabet.empty(), "msqp: empty phase alphabet");
    if (chosen_phases) {
        require(chosen_phases->size() == subbands.size(), "msqp: chosen_phases size must equal the subband count");
        for (double ph : *chosen_phases) {
            const bool member = std::any_of(phase_alphabet.begin(), phase_alphabet.end(),
                                            [&](double a) { return std::abs(a - ph) < 1e-12; });
            require(member, "msqp: chosen phase " + std::to_string(ph) + " not in the phase alphabet");
        }
    }
}

MsQpSpec make_uniform_msqp(int num_subbands, long long subband_len, long long guard_len, long long root,
                           double sample_period_s) {
    require(num_subbands >= 1, "msqp: at least one subband required");
    MsQpSpec spec;
    const long long p = root > 0 ? root : zc_root_design(subband_len);
    spec.subbands.assign(static_cast<std::size_t>(num_subbands), ZcParams{subband_len, p});
    spec.guard_len = guard_len;
    spec.sample_period_s = sample_period_s;
    spec.validate();
    return spec;
}

namespace {

void place_subband(const MsQpSpec& spec, std::size_t m, long long offset, double phase, CVec& X) {
    const auto& zc = spec.subbands[m];
    const CVec B = fft::forward(zc_generate(zc).samples);
    const cdouble rot = std::polar(1.0 / std::sqrt(static_cast<double>(zc.length)), phase);
    for (long long k = 0; k < zc.length; ++k)
        X[static_cast<std::size_t>(offset + k)] = B[static_cast<std::size_t>(k)] * rot;
}

ComplexSequence synthesize(const MsQpSpec& spec, const CVec& X) {
    CVec x = fft::inverse(X);
    const double scale = 1.0 / std::sqrt(static_cast<double>(X.size()));
    for (auto& v : x) v *= scale;
    return {std::move(x), spec.sample_period_s};
}

}  // namespace

CVec msqp_spectrum(const MsQpSpec& spec) {
    spec.validate();
    CVec X(static_cast<std::size_t>(spec.total_len()), cdouble{});
    const auto f = spec.offsets();
    const auto ph = spec.phases();
    for (std::size_t m = 0; m < spec.num_subbands(); ++m) place_subband(spec, m, f[m], ph[m], X);
    return X;
}

ComplexSequence msqp_build(const MsQpSpec& spec) { return synthesize(spec, msqp_spectrum(spec)); }

ComplexSequence subsequence_extract(const MsQpSpec& spec, std::size_t m) {
    spec.validate();
    require(m < spec.num_subbands(), "subsequence_extract: subband index out of range");
    CVec X(static_cast<std::size_t>(spec.total_len()), cdouble{});
    place_subband(spec, m, spec.offsets()[m], spec.phases()[m], X);
    return synthesize(spec, X);
}

ComplexSequence msqp_build_closed_form(const MsQpSpec& spec) {
    spec.validate();
    const long long N = spec.total_len();
    const auto f = spec.offsets();
    const auto ph = spec.phases();
    CVec x(static_cast<std::size_t>(N), cdouble{});
    for (std::size_t m = 0; m < spec.num_subbands(); ++m) {
        const long long L = spec.subbands[m].length;
        const CVec b = zc_generate(spec.subbands[m]).samples;
        const double norm = 1.0 / std::sqrt(static_cast<double>(N) * static_cast<double>(L));
        for (long long n = 0; n < N; ++n) {
            cdouble acc{};
            for (long long l = 0; l < L; ++l) {
                // u = n/N - l/L, taken over the common denominator N L
                const long long num = n * L - l * N;
                const double u = static_cast<double>(num) / static_cast<double>(N * L);
                // |u| < 1, so the removable singularity sits at u = 0 only,
                // where sin(L pi u)/sin(pi u) -> L
                const double kernel = num == 0 ? static_cast<double>(L) : std::sin(L * kPi * u) / std::sin(kPi * u);
                acc += b[static_cast<std::size_t>(l)] * kernel * std::polar(1.0, kPi * static_cast<double>(L - 1) * u);
            }
            x[static_cast<std::size_t>(n)] +=
                acc * norm * std::polar(1.0, 2.0 * kPi * static_cast<double>(f[m]) * n / static_cast<double>(N) + ph[m]);
        }
    }
    return {std::move(x), spec.sample_period_s};
}

}  // namespace jrc
