#pragma once

#include "dynkin/equilibrium.hpp"
#include "dynkin/game.hpp"

namespace dynkin {

// Symmetric games: both players share one payoff triple and the solver
// targets profiles used by both players simultaneously.

enum class SymmetricMethod { ClosedForm, WarOfAttrition, FixedPoint };

struct SymmetricSolution {
    StoppingProfile p;  // shared by both players
    Vec value;          // shared equilibrium value
    SymmetricMethod method = SymmetricMethod::FixedPoint;
    bool converged = false;
    int iterations = 0;
    EquilibriumReport verification;
};

/// One-player optimal stopping value V = max{f, alpha*PV} by value
/// iteration from V0 = f.
Vec optimal_stopping_value(const ValidatedGame& game, double tol = 1e-9);

/// Closed-form symmetric profile for games with f = h: stop with the
/// probability that leaves the opponent indifferent wherever stopping
/// strictly beats continuing against a stopped opponent.
StoppingProfile symmetric_profile(const ValidatedGame& game, const Vec& value,
                                  double tol = 1e-9);

/// War-of-attrition formula p = (f - alpha*Pf)/(g - alpha*Pf); requires f
/// strictly alpha-excessive and g > f = h, rejected with witnesses
/// otherwise. The profile is fully mixed and the value equals f.
SymmetricSolution war_of_attrition_profile(const ValidatedGame& game);

struct SymmetricSearchOptions {
    double tol = 1e-8;
    double solver_tol = 1e-9;
    int max_iter = 10000;
    double damping = 0.5;
};

/// Damped symmetric best-response iteration; indifferent states are
/// resolved through the symmetric equilibrium of the local 2x2 game
/// (smallest admissible stop probability). Non-convergence reports the
/// best iterate and never claims non-existence.
SymmetricSolution symmetric_fixed_point(const ValidatedGame& game,
                                        const SymmetricSearchOptions& options = {});

/// Solves a symmetric game: closed form when f = h, damped fixed point
/// otherwise.
SymmetricSolution solve_symmetric(const ValidatedGame& game,
                                  const SymmetricSearchOptions& options = {});

}  // namespace dynkin
