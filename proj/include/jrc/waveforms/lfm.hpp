#pragma once

#include "jrc/types.hpp"

namespace jrc {

struct LfmSpec {
    double bandwidth_hz = 0.0;
    double duration_s = 0.0;
    double sample_period_s = 0.0;

    void validate() const;
};

/// x[n] = exp(j pi K (n T_s - T/2)^2), K = B / T, sweeping [-B/2, B/2].
/// Length round(T / T_s).
ComplexSequence lfm_generate(const LfmSpec& spec);

}  // namespace jrc
