#pragma once

// Multi-subband quasi-perfect (MS-QP) sensing sequence: the DFTs of M
// Zadoff-Chu sequences are placed on adjacent subbands separated by empty
// guard bins and inverse-transformed into one wideband sequence.

#include <optional>
#include <vector>

#include "jrc/types.hpp"
#include "jrc/waveforms/zc.hpp"

namespace jrc {

/// {0, pi/2, pi, 3pi/2}.
std::vector<double> default_phase_alphabet();

struct MsQpSpec {
    std::vector<ZcParams> subbands;
    long long guard_len = 0;
    std::vector<double> phase_alphabet = default_phase_alphabet();
    /// Per-subband rotations; unset means all zeros.
    std::optional<std::vector<double>> chosen_phases;
    double sample_period_s = 1e-10;

    /// N = sum L_m + M * L_G.
    long long total_len() const;
    /// Start bin f_m of every subband.
    std::vector<long long> offsets() const;
    /// chosen_phases, or zeros when no search has been run.
    std::vector<double> phases() const;
    std::size_t num_subbands() const { return subbands.size(); }

    void validate() const;
};

/// M identical subbands of length L with root `root` (0 = designed root).
MsQpSpec make_uniform_msqp(int num_subbands, long long subband_len, long long guard_len,
                           long long root = 0, double sample_period_s = 1e-10);

/// Length-N spectrum with X[f_m + k] = exp(j phi_m) DFT_L(b_m)[k] / sqrt(L_m)
/// and exact zeros on guard bins.
CVec msqp_spectrum(const MsQpSpec& spec);

/// x[n] = (1/sqrt N) sum_k X[k] exp(j 2 pi k n / N).
ComplexSequence msqp_build(const MsQpSpec& spec);

/// Direct evaluation of the Dirichlet-kernel interpolation form, O(N sum L_m).
/// Reference path for msqp_build; the removable singularity is handled by
/// its limit.
ComplexSequence msqp_build_closed_form(const MsQpSpec& spec);

/// Contribution of subband m alone (including its rotation). Summing all
/// subsequences reproduces msqp_build.
ComplexSequence subsequence_extract(const MsQpSpec& spec, std::size_t m);

}  // namespace jrc
