#pragma once

#include "dynkin/equilibrium.hpp"
#include "dynkin/game.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dynkin {

// Zero-sum specialization: player 1 maximizes, player 2 is the exact
// negation. All functions below require classify_game(...).is_zero_sum
// and work with player 1's triple (f, g, h).

/// Solution of one 2x2 zero-sum local game with entries, row player
/// maximizing: continue/continue, continue/stop, stop/continue, stop/stop.
struct LocalGameSolution {
    double value = 0.0;
    double row_continue = 0.0;  // row player's probability of continuing
    double col_continue = 0.0;
    bool pure = false;
};

/// Pure saddle points win over mixed, checked in the order (stop,stop),
/// (stop,continue), (continue,stop), (continue,continue). Without a
/// saddle the unique fully mixed solution applies.
LocalGameSolution solve_local_matrix_game(double cc, double cs, double sc,
                                          double ss);

/// Monotone iteration for the value equation
///   V(x) = med(f(x), alpha*PV(x), g(x))  when f(x) < g(x),
///   V(x) = h(x)                          otherwise,
/// starting from f ^ h. Requires h to be the middle payoff at every
/// state; throws MedConditionViolated with witnesses otherwise.
Vec med_value_iteration(const ValidatedGame& game, double tol = 1e-9,
                        int* iterations = nullptr);

/// Pure profile assembly from a solution of the med value equation via
/// the nine-case sign dispatch. Free slots default to stopping where the
/// case pins the other player and to continuing elsewhere; a failing
/// default is retried with the opposite endpoint before giving up.
std::pair<StoppingProfile, StoppingProfile> assemble_pure_profiles(
    const ValidatedGame& game, const Vec& value, double guard_tol = 1e-9);

enum class ZeroSumMethod { MedIteration, Shapley };

struct ZeroSumSolution {
    enum class Status { Ok, MaxIterExceeded, VerificationFailed };

    Vec value;  // player 1's value; player 2's is the negation
    StoppingProfile p1, p2;
    ZeroSumMethod method = ZeroSumMethod::Shapley;
    bool pure = false;
    Status status = Status::Ok;
    int iterations = 0;
    double residual = 0.0;
    EquilibriumReport verification;
};

/// Per-state 2x2 matrix-game value iteration; the extracted profiles are
/// always re-verified against the full system before being reported Ok.
ZeroSumSolution shapley_solve(const ValidatedGame& game, double tol = 1e-9,
                              int max_iter = 100000, double verify_tol = 1e-8);

/// Solves a zero-sum game on the dispatch rule med-condition -> med
/// iteration with pure assembly, otherwise Shapley iteration.
ZeroSumSolution solve_zero_sum(const ValidatedGame& game, double tol = 1e-9,
                               int max_iter = 100000, double verify_tol = 1e-8);

struct PureExistenceResult {
    std::vector<bool> per_state;  // both inequalities hold at this state
    bool exists = false;
    std::optional<std::pair<StoppingProfile, StoppingProfile>> profiles;
    std::optional<EquilibriumReport> verification;
};

/// Exact test: given the game value, a pure equilibrium exists iff
///   h v alpha*PV >= f ^ g  and  h ^ alpha*PV <= f v g  at every state.
/// On success the pure pair is assembled from the four-case dispatch.
PureExistenceResult pure_existence_check(const ValidatedGame& game,
                                         const Vec& value, double tol = 1e-9);

/// Lowest satisfied case among
///   1: g <= h <= f   2: aPiV <= f <= h   3: h <= g <= aPiV
///   4: f <= aPiV <= g,
/// or 0 when none holds (possible only where the existence test fails).
int classify_pure_case(double f, double g, double h, double a_pi_v,
                        double tol = 1e-9);

struct PureDiagnostics {
    std::vector<int> m1;  // states where f v g < h
    std::vector<int> m2;  // states where h < f ^ g
    Vec v_m1, v_m2;       // constrained stopping values (empty if set empty)
    std::vector<int> witnesses_m1, witnesses_m2;
    bool pure_impossible = false;
    // Filled by callers that also know the game value (the iff test).
    std::optional<std::vector<bool>> criterion_per_state;
    std::optional<bool> criterion_exists;
};

/// Sufficient-only non-existence test from the payoff functions alone:
/// constrained stopping values on the regions where simultaneous stopping
/// dominates (or is dominated by) the one-sided payoffs.
PureDiagnostics pure_nonexistence_diagnostic(const ValidatedGame& game,
                                             double tol = 1e-12);

}  // namespace dynkin
