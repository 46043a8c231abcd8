#pragma once

#include "dynkin/game.hpp"

#include <utility>
#include <vector>

namespace dynkin {

// One-player optimal stopping against a fixed opponent profile. The
// augmented state space (absorbed copies plus the cemetery) is never
// materialized: absorption contributes the closed-form term q(x)*g(x)
// and killing contributes 0 inside the recursion.

struct AuxiliaryProblem {
    const ValidatedGame* game = nullptr;
    int player = 1;
    Vec opponent_p;       // q, the opponent's per-state stop probability
    Vec continue_reward;  // (1-q)*f + q*h, the reward of stopping while live
    Vec absorbed_reward;  // g, the reward frozen at absorption
};

struct AuxiliaryValue {
    Vec v_c;           // value on live states
    Vec v_s;           // value on absorbed states, equal to absorbed_reward
    Vec continuation;  // (1-q)*alpha*(P v_c) + q*g, the continue side
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

enum class ResponseTag { MustStop, Indifferent, MustContinue };

struct BestResponseConstraint {
    std::vector<ResponseTag> tags;
};

struct BestResponseCheck {
    bool ok = false;
    std::vector<int> violations;
};

AuxiliaryProblem build_auxiliary(const ValidatedGame& game, int player,
                                 const StoppingProfile& opponent);

/// Value iteration on V(x) = max{(1-q)alpha(PV)(x) + q g(x), r(x)} from
/// V0 = r. Stops once the sup-norm step is below tol*(1-alpha)/(2 alpha),
/// which bounds the fixed-point residual by tol and the error by tol/2.
AuxiliaryValue solve_wald_bellman(const AuxiliaryProblem& aux, double tol = 1e-9,
                                  int max_iter = 1000000);

BestResponseConstraint classify_best_response(const AuxiliaryProblem& aux,
                                              const AuxiliaryValue& value,
                                              double tol = 1e-9);

/// Membership test: p = 1 where stopping is strictly better, p = 0 where
/// continuing is strictly better, anything on indifferent states.
BestResponseCheck is_best_response(const StoppingProfile& profile,
                                   const BestResponseConstraint& constraints);

/// Exact expected payoffs of a profile pair for both players via the
/// one-step decomposition; dense linear solve in each player's value.
std::pair<Vec, Vec> evaluate_payoffs(const ValidatedGame& game,
                                     const StoppingProfile& p1,
                                     const StoppingProfile& p2);

enum class StoppingMode { Max, Min };

/// Optimal stopping restricted to tau <= first exit from the region:
/// V = max/min{k, alpha P V} inside, V = k frozen outside. Never stopping
/// contributes 0 through the discount, never an explicit infinity.
Vec constrained_stopping_value(const ValidatedGame& game,
                               const std::vector<bool>& region, const Vec& reward,
                               StoppingMode mode, double tol = 1e-12,
                               int max_iter = 1000000);

}  // namespace dynkin
