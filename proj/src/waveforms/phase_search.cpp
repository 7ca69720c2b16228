#include "jrc/waveforms/phase_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "jrc/dsp.hpp"
#include "jrc/rng.hpp"

namespace jrc {
namespace {

struct Candidate {
    double peak = std::numeric_limits<double>::infinity();
    std::vector<int> idx;
};

/// True when `a` beats `b`: lower peak power, ties to the smaller index list.
bool better(const Candidate& a, const Candidate& b) {
    if (b.idx.empty()) return true;
    const double tol = 1e-12 * std::max(a.peak, b.peak);
    if (a.peak < b.peak - tol) return true;
    if (a.peak > b.peak + tol) return false;
    return a.idx < b.idx;
}

struct Planar {
    std::vector<double> re, im;
    explicit Planar(std::size_t n = 0) : re(n, 0.0), im(n, 0.0) {}
};

Planar to_planar(const CVec& v) {
    Planar p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        p.re[i] = v[i].real();
        p.im[i] = v[i].imag();
    }
    return p;
}

// x += c * s, returns max |x|^2
double update_and_peak(Planar& x, const Planar& s, cdouble c) {
    const std::size_t n = x.re.size();
    double* __restrict xr = x.re.data();
    double* __restrict xi = x.im.data();
    const double* __restrict sr = s.re.data();
    const double* __restrict si = s.im.data();
    const double cr = c.real(), ci = c.imag();
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = xr[i] + cr * sr[i] - ci * si[i];
        const double m = xi[i] + cr * si[i] + ci * sr[i];
        xr[i] = r;
        xi[i] = m;
        const double p = r * r + m * m;
        mx = p > mx ? p : mx;
    }
    return mx;
}

double assemble(const std::vector<Planar>& comps, const std::vector<cdouble>& rot, const std::vector<int>& idx,
                Planar& x) {
    std::fill(x.re.begin(), x.re.end(), 0.0);
    std::fill(x.im.begin(), x.im.end(), 0.0);
    double mx = 0.0;
    for (std::size_t m = 0; m < comps.size(); ++m) mx = update_and_peak(x, comps[m], rot[static_cast<std::size_t>(idx[m])]);
    return mx;
}

bool is_uniform_group(std::span<const double> alphabet) {
    const double A = static_cast<double>(alphabet.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        const double expect = 2.0 * kPi * static_cast<double>(a) / A;
        double d = std::remainder(alphabet[a] - expect, 2.0 * kPi);
        if (std::abs(d) > 1e-12) return false;
    }
    return true;
}

/// A^d saturated at `cap + 1`.
std::uint64_t pow_saturated(std::uint64_t A, std::size_t d, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (r > cap / A) return cap + 1;
        r *= A;
    }
    return r;
}

void validate_inputs(std::span<const CVec> components, std::span<const double> alphabet) {
    require(!alphabet.empty(), "phase_rotation_search: empty phase alphabet");
    require(!components.empty(), "phase_rotation_search: no subbands");
    for (const auto& c : components) require(c.size() == components[0].size(), "phase_rotation_search: component length mismatch");
}

PhaseSearchResult finish(std::span<const CVec> components, std::span<const double> alphabet, const Candidate& best,
                         bool exhaustive, std::uint64_t evaluated) {
    PhaseSearchResult res;
    res.indices = best.idx;
    for (int i : best.idx) res.phases.push_back(alphabet[static_cast<std::size_t>(i)]);
    CVec x(components[0].size(), cdouble{});
    for (std::size_t m = 0; m < components.size(); ++m) {
        const cdouble r = std::polar(1.0, res.phases[m]);
        for (std::size_t n = 0; n < x.size(); ++n) x[n] += r * components[m][n];
    }
    res.papr_db = papr_db(x);
    res.exhaustive = exhaustive;
    res.evaluated = evaluated;
    return res;
}

Candidate exhaustive_search(const std::vector<Planar>& comps, const std::vector<cdouble>& rot, bool fix_first,
                            std::uint64_t& evaluated) {
    const std::size_t M = comps.size();
    const int A = static_cast<int>(rot.size());
    std::vector<std::size_t> free_pos;
    for (std::size_t m = fix_first ? 1 : 0; m < M; ++m) free_pos.push_back(m);
    const std::size_t D = free_pos.size();

    std::size_t outer = 0;
    std::uint64_t chunks = 1;
    while (outer < D && chunks < 256) {
        chunks *= static_cast<std::uint64_t>(A);
        ++outer;
    }
    std::vector<Candidate> chunk_best(chunks);
    std::vector<std::uint64_t> chunk_count(chunks, 0);
    const std::size_t n = comps[0].re.size();

#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        std::vector<int> idx(M, 0);
        std::uint64_t rem = static_cast<std::uint64_t>(c);
        for (std::size_t j = outer; j-- > 0;) {
            idx[free_pos[j]] = static_cast<int>(rem % static_cast<std::uint64_t>(A));
            rem /= static_cast<std::uint64_t>(A);
        }
        Planar x(n);
        Candidate best;
        Candidate cur{assemble(comps, rot, idx, x), idx};
        std::uint64_t count = 1;
        best = cur;
        // reflected A-ary Gray code over the inner free digits
        const std::size_t inner = D - outer;
        std::vector<int> dir(inner, +1);
        while (true) {
            std::size_t j = 0;
            for (; j < inner; ++j) {
                const std::size_t pos = free_pos[outer + j];
                const int next = cur.idx[pos] + dir[j];
                if (next >= 0 && next < A) {
                    const cdouble delta = rot[static_cast<std::size_t>(next)] - rot[static_cast<std::size_t>(cur.idx[pos])];
                    cur.idx[pos] = next;
                    cur.peak = update_and_peak(x, comps[pos], delta);
                    break;
                }
                dir[j] = -dir[j];
            }
            if (j == inner) break;
            ++count;
            if (better(cur, best)) best = cur;
        }
        chunk_best[static_cast<std::size_t>(c)] = std::move(best);
        chunk_count[static_cast<std::size_t>(c)] = count;
    }

    Candidate best;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        if (better(chunk_best[c], best)) best = chunk_best[c];
        evaluated += chunk_count[c];
    }
    return best;
}

Candidate random_search(const std::vector<Planar>& comps, const std::vector<cdouble>& rot, std::uint64_t budget,
                        std::uint64_t seed) {
    const std::size_t M = comps.size();
    const int A = static_cast<int>(rot.size());
    const std::size_t n = comps[0].re.size();
    std::vector<double> peaks(budget);
#pragma omp parallel
    {
        Planar x(n);
        std::vector<int> idx(M);
#pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(budget); ++i) {
            // sample 0 is the unrotated assignment
            if (i == 0) {
                std::fill(idx.begin(), idx.end(), 0);
            } else {
                Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
                std::uniform_int_distribution<int> pick(0, A - 1);
                for (auto& d : idx) d = pick(rng);
            }
            peaks[static_cast<std::size_t>(i)] = assemble(comps, rot, idx, x);
        }
    }
    Candidate best;
    for (std::uint64_t i = 0; i < budget; ++i) {
        std::vector<int> idx(M, 0);
        if (i != 0) {
            Rng rng(derive_seed(seed, {i}));
            std::uniform_int_distribution<int> pick(0, A - 1);
            for (auto& d : idx) d = pick(rng);
        }
        Candidate c{peaks[i], std::move(idx)};
        if (better(c, best)) best = std::move(c);
    }
    return best;
}

}  // namespace

std::vector<CVec> unrotated_components(const MsQpSpec& spec) {
    MsQpSpec plain = spec;
    plain.chosen_phases.reset();
    std::vector<CVec> out;
    out.reserve(spec.num_subbands());
    for (std::size_t m = 0; m < spec.num_subbands(); ++m) out.push_back(subsequence_extract(plain, m).samples);
    return out;
}

PhaseSearchResult phase_rotation_search(std::span<const CVec> components, std::span<const double> alphabet,
                                        const PhaseSearchOptions& options) {
    validate_inputs(components, alphabet);
    require(options.budget >= 1, "phase_rotation_search: budget must be positive");
    std::vector<Planar> comps;
    for (const auto& c : components) comps.push_back(to_planar(c));
    std::vector<cdouble> rot;
    for (double a : alphabet) rot.push_back(std::polar(1.0, a));

    const bool fix_first = is_uniform_group(alphabet) && components.size() > 1;
    const std::size_t free_digits = components.size() - (fix_first ? 1 : 0);
    const std::uint64_t combos = pow_saturated(alphabet.size(), free_digits, options.budget);
    std::uint64_t evaluated = 0;
    if (combos <= options.budget) {
        const Candidate best = exhaustive_search(comps, rot, fix_first, evaluated);
        return finish(components, alphabet, best, true, evaluated);
    }
    const Candidate best = random_search(comps, rot, options.budget, options.seed);
    return finish(components, alphabet, best, false, options.budget);
}

PhaseSearchResult phase_rotation_search(const MsQpSpec& spec, const PhaseSearchOptions& options) {
    spec.validate();
    const auto comps = unrotated_components(spec);
    return phase_rotation_search(comps, spec.phase_alphabet, options);
}

namespace serial {

PhaseSearchResult phase_search_brute_force(std::span<const CVec> components, std::span<const double> alphabet) {
    validate_inputs(components, alphabet);
    const std::size_t M = components.size();
    const int A = static_cast<int>(alphabet.size());
    std::vector<int> idx(M, 0);
    Candidate best;
    std::uint64_t evaluated = 0;
    while (true) {
        CVec x(components[0].size(), cdouble{});
        for (std::size_t m = 0; m < M; ++m) {
            const cdouble r = std::polar(1.0, alphabet[static_cast<std::size_t>(idx[m])]);
            for (std::size_t n = 0; n < x.size(); ++n) x[n] += r * components[m][n];
        }
        double peak = 0.0;
        for (const auto& v : x) peak = std::max(peak, std::norm(v));
        Candidate c{peak, idx};
        if (better(c, best)) best = c;
        ++evaluated;
        // lexicographic increment, last digit fastest
        bool carry = true;
        for (std::size_t j = M; j-- > 0 && carry;) {
            carry = ++idx[j] == A;
            if (carry) idx[j] = 0;
        }
        if (carry) break;
    }
    return finish(components, alphabet, best, true, evaluated);
}

}  // namespace serial
}  // namespace jrc
