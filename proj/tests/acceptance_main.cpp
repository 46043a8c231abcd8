// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.

#include "dynkin/equilibrium.hpp"
#include "dynkin/simulate.hpp"
#include "dynkin/solve.hpp"
#include "dynkin/stopping.hpp"
#include "dynkin/symmetric.hpp"
#include "dynkin/zero_sum.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace dynkin;
using namespace dynkin::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

// 1. Quantitative reproduction of the two-state mixed equilibrium.
Outcome criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const RunReport report = solve_game(two_state_example(), {});
    const double elapsed = seconds_since(start);

    Outcome out;
    const auto& eq = report.equilibrium;
    const Vec expect_p = vec({0.5, 1.0});
    const Vec expect_v = vec({1.0, 4.0});
    const double err = std::max({(eq.p1.p - expect_p).cwiseAbs().maxCoeff(),
                                 (eq.p2.p - expect_p).cwiseAbs().maxCoeff(),
                                 (eq.v1 - expect_v).cwiseAbs().maxCoeff()});
    out.pass = report.converged && err < 1e-9 && elapsed < 1.0;
    std::ostringstream detail;
    detail << "max error " << err << ", " << elapsed << " s via " << report.solver_path;
    out.detail = detail.str();
    return out;
}

// 2. Pure non-existence diagnostics on the same game.
Outcome criterion_2() {
    SolveOptions options;
    options.mode = SolveMode::DiagnosePure;
    const RunReport report = solve_game(two_state_example(), options);

    Outcome out;
    if (!report.diagnostics) {
        return {false, "no diagnostics emitted"};
    }
    const PureDiagnostics& diag = *report.diagnostics;
    const double v = diag.m1.size() == 1 ? diag.v_m1[diag.m1[0]] : 0.0;
    out.pass = diag.m1 == std::vector<int>{0} && diag.m2.empty() &&
               std::abs(v - 8.0 / 3.0) < 1e-9 &&
               diag.witnesses_m1 == std::vector<int>{0} && diag.pure_impossible &&
               diag.criterion_exists && !*diag.criterion_exists;
    std::ostringstream detail;
    detail << "M1 size " << diag.m1.size() << ", V_M1 = " << v
           << ", pure_impossible = " << diag.pure_impossible;
    out.detail = detail.str();
    return out;
}

// 3 & 4. Pure construction and value uniqueness on 1000 random
// med-condition zero-sum games.
Outcome criterion_3(std::vector<ValidatedGame>& corpus, Outcome& crit4) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260810);
    const double alphas[3] = {0.5, 0.8, 0.95};

    int built = 0;
    double worst_residual = 0.0;
    double worst_gap = 0.0;
    Outcome out;
    crit4.pass = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 8;
        const double alpha = alphas[trial % 3];
        corpus.push_back(random_med_zero_sum(rng, n, alpha));
        const ValidatedGame& game = corpus.back();

        const Vec value = med_value_iteration(game, 1e-9);
        const auto [p1, p2] = assemble_pure_profiles(game, value);
        const auto report = verify_equilibrium(game, p1, p2, 1e-8);
        worst_residual = std::max(worst_residual, report.max_residual);
        if (report.verdict != Verdict::Verified || !p1.pure() || !p2.pure()) {
            out.pass = false;
        }
        ++built;

        const auto shapley = shapley_solve(game, 1e-9);
        worst_gap =
            std::max(worst_gap, (shapley.value - value).cwiseAbs().maxCoeff());
        if (worst_gap >= 2e-9) crit4.pass = false;
    }
    const double elapsed = seconds_since(start);
    out.pass = out.pass && built == 1000 && elapsed < 60.0;
    std::ostringstream detail;
    detail << built << " games, worst residual " << worst_residual << ", "
           << elapsed << " s";
    out.detail = detail.str();
    std::ostringstream detail4;
    detail4 << "worst value gap " << worst_gap;
    crit4.detail = detail4.str();
    return out;
}

// 5. Closed-form symmetric construction on 1000 random f = h games.
Outcome criterion_5() {
    std::mt19937_64 rng(5150);
    const double alphas[3] = {0.5, 0.8, 0.95};
    double worst = 0.0;
    Outcome out;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 8;
        const ValidatedGame game = random_symmetric_fh(rng, n, alphas[trial % 3]);
        const Vec value = optimal_stopping_value(game, 1e-9);
        const StoppingProfile p = symmetric_profile(game, value);
        const auto report = verify_equilibrium(game, p, p, 1e-8);
        worst = std::max(worst, report.max_residual);
        if (report.verdict != Verdict::Verified) out.pass = false;
    }
    std::ostringstream detail;
    detail << "worst residual " << worst;
    out.detail = detail.str();
    return out;
}

// 6. War of attrition on one state: exact mixed probability, and the
// all-stop profile is not a best response to itself.
Outcome criterion_6() {
    const ValidatedGame game =
        symmetric_game(0.5, mat({{1.0}}), vec({1}), vec({2}), vec({1}));
    const auto sol = war_of_attrition_profile(game);

    const double p_err = std::abs(sol.p.p[0] - 1.0 / 3.0);
    const double v_err = std::abs(sol.value[0] - 1.0);

    const StoppingProfile ones = game.make_profile(vec({1.0}));
    const auto aux = build_auxiliary(game, 1, ones);
    const auto val = solve_wald_bellman(aux, 1e-12);
    const auto cons = classify_best_response(aux, val, 1e-9);
    const bool all_stop_is_br = is_best_response(ones, cons).ok;

    Outcome out;
    out.pass = p_err < 1e-12 && v_err < 1e-12 && !all_stop_is_br &&
               sol.verification.verdict == Verdict::Verified;
    std::ostringstream detail;
    detail << "p = " << sol.p.p[0] << ", all-stop best response: "
           << (all_stop_is_br ? "yes" : "no");
    out.detail = detail.str();
    return out;
}

// 7. Exhaustive pure-pair enumeration agrees with both verification and
// the zero-sum pure existence criterion on 200 small games.
Outcome criterion_7() {
    std::mt19937_64 rng(777);
    int pair_mismatches = 0;
    int existence_mismatches = 0;
    long pairs_checked = 0;

    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 3;
        ValidatedGame game = [&] {
            switch (trial % 3) {
                case 0: return random_zero_sum(rng, n, 0.7);
                case 1: {
                    PayoffTriple t{random_vec(rng, n, -10, 10),
                                   random_vec(rng, n, -10, 10),
                                   random_vec(rng, n, -10, 10)};
                    return general_game(0.7, random_kernel(rng, n), t, t);
                }
                default: return random_general(rng, n, 0.7);
            }
        }();

        // constraints per player against every pure opponent profile
        const auto pures = all_pure_vectors(n);
        std::vector<BestResponseConstraint> cons1, cons2;
        for (const Vec& q : pures) {
            const auto opp = game.make_profile(q);
            const auto aux1 = build_auxiliary(game, 1, opp);
            cons1.push_back(
                classify_best_response(aux1, solve_wald_bellman(aux1, 1e-11), 1e-9));
            const auto aux2 = build_auxiliary(game, 2, opp);
            cons2.push_back(
                classify_best_response(aux2, solve_wald_bellman(aux2, 1e-11), 1e-9));
        }

        bool any_pure = false;
        for (std::size_t i = 0; i < pures.size(); ++i) {
            for (std::size_t j = 0; j < pures.size(); ++j) {
                const auto p1 = game.make_profile(pures[i]);
                const auto p2 = game.make_profile(pures[j]);
                const bool by_constraints = is_best_response(p1, cons1[j]).ok &&
                                            is_best_response(p2, cons2[i]).ok;
                const bool by_verification =
                    verify_equilibrium(game, p1, p2).verdict == Verdict::Verified;
                if (by_constraints != by_verification) ++pair_mismatches;
                any_pure = any_pure || by_constraints;
                ++pairs_checked;
            }
        }

        if (trial % 3 == 0) {
            const auto sol = shapley_solve(game, 1e-11);
            const auto existence = pure_existence_check(game, sol.value);
            if (existence.exists != any_pure) ++existence_mismatches;
        }
    }

    Outcome out;
    out.pass = pair_mismatches == 0 && existence_mismatches == 0;
    std::ostringstream detail;
    detail << pairs_checked << " pairs, " << pair_mismatches
           << " pair mismatches, " << existence_mismatches
           << " existence mismatches";
    out.detail = detail.str();
    return out;
}

// 8. Solver against 60-step backward induction on 100 random problems.
Outcome criterion_8() {
    std::mt19937_64 rng(888);
    std::uniform_real_distribution<double> alpha_dist(0.8, 0.97);
    double worst_ratio = 0.0;
    Outcome out;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        const double alpha = alpha_dist(rng);
        const ValidatedGame game = random_general(rng, n, alpha);
        const StoppingProfile opp = random_profile(rng, game);
        const int player = 1 + trial % 2;

        const auto aux = build_auxiliary(game, player, opp);
        const auto value = solve_wald_bellman(aux, 1e-12);
        const Vec oracle = backward_induction_value(game, player, opp.p, 60);
        const double bound = 2.0 * std::pow(alpha, 60) * game.max_abs_payoff();
        const double gap = (value.v_c - oracle).cwiseAbs().maxCoeff();
        worst_ratio = std::max(worst_ratio, gap / bound);
        if (gap > bound) out.pass = false;
    }
    std::ostringstream detail;
    detail << "worst gap/bound ratio " << worst_ratio;
    out.detail = detail.str();
    return out;
}

// 9. Monte Carlo means against analytic payoffs, 4 standard errors.
Outcome criterion_9() {
    std::mt19937_64 rng(999);
    std::uniform_real_distribution<double> alpha_dist(0.5, 0.8);
    int hits1 = 0, hits2 = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const ValidatedGame game = random_general(rng, n, alpha_dist(rng));
        const auto p1 = random_profile(rng, game);
        const auto p2 = random_profile(rng, game);
        const auto [v1, v2] = evaluate_payoffs(game, p1, p2);

        SimulationConfig config;
        config.samples = 100000;
        config.seed = 424242 + trial;
        config.initial_state = trial % n;
        const auto est = estimate_payoffs(game, p1, p2, config);
        if (std::abs(est.mean1 - v1[config.initial_state]) <
            4.0 * est.std_err1 + 1e-12) {
            ++hits1;
        }
        if (std::abs(est.mean2 - v2[config.initial_state]) <
            4.0 * est.std_err2 + 1e-12) {
            ++hits2;
        }
    }

    const ValidatedGame example = two_state_example();
    const auto p = example.make_profile(vec({0.5, 1.0}));
    SimulationConfig config;
    config.samples = 100000;
    config.seed = 31337;
    config.initial_state = 0;
    const auto est1 = estimate_payoffs(example, p, p, config);
    config.initial_state = 1;
    const auto est2 = estimate_payoffs(example, p, p, config);
    const bool example_ok =
        std::abs(est1.mean1 - 1.0) < 4.0 * est1.std_err1 &&
        std::abs(est2.mean1 - 4.0) <= 4.0 * est2.std_err1 + 1e-12;

    Outcome out;
    out.pass = hits1 >= 47 && hits2 >= 47 && example_ok;
    std::ostringstream detail;
    detail << "player-1 hits " << hits1 << "/50, player-2 hits " << hits2
           << "/50, example means " << est1.mean1 << " / " << est2.mean1;
    out.detail = detail.str();
    return out;
}

// 10. Truncations of the doubling-reward chain stay solvable while their
// values blow up with the truncation length. The payoff scale reaches
// 2^59, so tolerances are payoff-relative here; no convergence in the
// truncation limit is claimed (the infinite game has no equilibrium).
Outcome criterion_10() {
    Outcome out;
    std::ostringstream detail;
    double previous_sup = 0.0;
    for (const int length : {10, 20, 40, 60}) {
        Mat kernel = Mat::Zero(length, length);
        for (int i = 0; i + 1 < length; ++i) kernel(i, i + 1) = 1.0;
        kernel(length - 1, length - 1) = 1.0;
        Vec f(length), h = Vec::Zero(length);
        for (int i = 0; i < length; ++i) f[i] = std::pow(2.0, i);
        const ValidatedGame game = zero_sum_game(0.5, kernel, f, f, h);

        const double scale = game.max_abs_payoff();
        const auto sol = shapley_solve(game, 1e-10 * scale, 100000, 1e-9 * scale);
        const double sup = sol.value.cwiseAbs().maxCoeff();
        if (sol.status != ZeroSumSolution::Status::Ok) out.pass = false;
        if (sup <= previous_sup || sup < 0.25 * scale) out.pass = false;
        previous_sup = sup;
        detail << "N=" << length << ": sup|V| = " << sup << "; ";
    }
    detail << "values grow like the truncated payoffs themselves";
    out.detail = detail.str();
    return out;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
    std::vector<ValidatedGame> med_corpus;
    Outcome crit4_result;

    criteria.emplace_back("two-state mixed equilibrium reproduction", criterion_1);
    criteria.emplace_back("two-state pure non-existence diagnostics", criterion_2);
    criteria.emplace_back("pure construction on 1000 med-condition games",
                          [&] { return criterion_3(med_corpus, crit4_result); });
    criteria.emplace_back("value uniqueness across med and local-game iterations",
                          [&] { return crit4_result; });
    criteria.emplace_back("symmetric closed form on 1000 f=h games", criterion_5);
    criteria.emplace_back("war-of-attrition probability and deviation", criterion_6);
    criteria.emplace_back("brute-force equilibrium equivalence", criterion_7);
    criteria.emplace_back("60-step backward-induction agreement", criterion_8);
    criteria.emplace_back("Monte Carlo agreement at 4 standard errors", criterion_9);
    criteria.emplace_back("doubling-chain truncations solvable, values blow up",
                          criterion_10);

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& err) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + err.what();
        }
        if (!outcome.pass) ++failures;
        std::printf("[%s] criterion %zu: %s (%s)\n", outcome.pass ? "PASS" : "FAIL",
                    i + 1, criteria[i].first.c_str(), outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
