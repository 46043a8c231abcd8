#pragma once

#include "dynkin/equilibrium.hpp"
#include "dynkin/game.hpp"
#include "dynkin/simulate.hpp"
#include "dynkin/symmetric.hpp"
#include "dynkin/zero_sum.hpp"

#include <optional>
#include <string>

namespace dynkin {

enum class SolveMode { Auto, ZeroSum, Symmetric, General, DiagnosePure };

struct SolveOptions {
    SolveMode mode = SolveMode::Auto;
    double tol = 1e-9;      // solver tolerance; verification runs at 10x
    int max_iter = 10000;
    double damping = 0.5;
    int restarts = 16;
    std::uint64_t seed = 0;

    double verify_tol() const { return 10.0 * tol; }
};

struct RunReport {
    std::vector<std::string> states;
    double alpha = 0.0;
    GameClass classification;
    std::string solver_path;
    bool converged = false;
    EquilibriumReport equilibrium;
    std::optional<PureDiagnostics> diagnostics;
    std::optional<EmpiricalEstimate> estimate;
    double solve_seconds = 0.0;
};

/// Classifies the game and dispatches: zero-sum with the med condition
/// to the monotone med iteration with pure assembly, other zero-sum
/// games to Shapley iteration, symmetric games to the closed form
/// (f = h) or the damped symmetric fixed point, everything else to the
/// general best-response search. Every returned profile pair has been
/// re-verified against the full system.
RunReport solve_game(const ValidatedGame& game, const SolveOptions& options = {});

std::string verdict_name(Verdict verdict);
std::string condition_name(int condition);

/// JSON rendering of reports; floating-point values are emitted with 17
/// significant digits so a reader recovers them exactly.
std::string report_to_json(const RunReport& report, const ValidatedGame& game);
std::string report_to_text(const RunReport& report, const ValidatedGame& game);
std::string equilibrium_to_json(const EquilibriumReport& report,
                                const ValidatedGame& game);
std::string estimate_to_json(const EmpiricalEstimate& estimate);

void save_report(const std::string& path, const RunReport& report,
                 const ValidatedGame& game);

}  // namespace dynkin
