#pragma once

#include "dynkin/game.hpp"
#include "dynkin/stopping.hpp"

#include <cstdint>
#include <utility>

namespace dynkin {

enum class Verdict { Verified, Failed };

// Residual columns of the verification system, per state:
//   0: value equation, player 1      1: value equation, player 2
//   2: stop dominance, player 1      3: continue dominance, player 1
//   4: stop dominance, player 2      5: continue dominance, player 2
inline constexpr int kNumConditions = 6;

struct EquilibriumReport {
    StoppingProfile p1, p2;
    Vec v1, v2;
    Mat residuals;  // size() x kNumConditions
    double max_residual = 0.0;
    Verdict verdict = Verdict::Failed;
    int worst_state = -1;
    int worst_condition = -1;
    int iterations = 0;
};

/// Checks a candidate pair against the full characterization system:
/// both value equations plus the four dominance implications. Dominance
/// checks activate once a probability clears 1e-9 from the boundary and
/// must then hold with slack tol. Verified iff every residual is < tol.
EquilibriumReport verify_equilibrium(const ValidatedGame& game,
                                     const StoppingProfile& p1,
                                     const StoppingProfile& p2,
                                     double tol = 1e-8);

struct SearchOptions {
    double tol = 1e-8;         // verification tolerance
    double solver_tol = 1e-9;  // inner stopping-problem tolerance
    int max_iter = 10000;      // rounds per attempt
    double damping = 0.5;
    int restarts = 16;
    std::uint64_t seed = 0;
};

struct SearchResult {
    bool converged = false;
    EquilibriumReport report;  // Verified, or the best-residual candidate
    int iterations = 0;
    int restarts_used = 0;
};

/// Damped simultaneous best-response iteration with periodic per-state
/// bimatrix refinement and seeded random restarts. Non-convergence is a
/// search limitation, never a non-existence claim.
SearchResult best_response_search(const ValidatedGame& game,
                                  const StoppingProfile& init1,
                                  const StoppingProfile& init2,
                                  const SearchOptions& options = {});

/// Per-state 2x2 bimatrix Nash candidates given value estimates; ties
/// resolved by higher v1, then higher v2, then preferring stopping.
std::pair<StoppingProfile, StoppingProfile> local_bimatrix_refine(
    const ValidatedGame& game, const Vec& v1, const Vec& v2);

}  // namespace dynkin
