#pragma once

// Subband phase-rotation search minimizing the PAPR of an MS-QP sequence.

#include <cstdint>
#include <span>
#include <vector>

#include "jrc/types.hpp"
#include "jrc/waveforms/msqp.hpp"

namespace jrc {

struct PhaseSearchOptions {
    /// Exhaustive when |alphabet|^M fits in the budget, seeded random
    /// sampling of `budget` assignments otherwise.
    std::uint64_t budget = std::uint64_t{1} << 20;
    std::uint64_t seed = 0;
};

struct PhaseSearchResult {
    std::vector<int> indices;  ///< alphabet index per subband
    std::vector<double> phases;
    double papr_db = 0.0;
    bool exhaustive = true;
    std::uint64_t evaluated = 0;
};

/// Minimizes papr_db over phase assignments drawn from spec.phase_alphabet.
/// Ties (relative 1e-12) go to the lexicographically smallest index list.
/// Exhaustive enumeration runs a reflected Gray code per chunk so every step
/// is a single subband update; chunks are fixed and reduced in order, so
/// the result is independent of the thread count.
PhaseSearchResult phase_rotation_search(const MsQpSpec& spec, const PhaseSearchOptions& options = {});

/// Same search over explicit per-subband components (unrotated subsequences).
PhaseSearchResult phase_rotation_search(std::span<const CVec> components, std::span<const double> alphabet,
                                        const PhaseSearchOptions& options = {});

namespace serial {

/// Lexicographic brute force, every assignment evaluated from scratch.
PhaseSearchResult phase_search_brute_force(std::span<const CVec> components, std::span<const double> alphabet);

}  // namespace serial

/// Unrotated subsequences of every subband (rotation stripped).
std::vector<CVec> unrotated_components(const MsQpSpec& spec);

}  // namespace jrc
