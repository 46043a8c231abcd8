#include "dynkin/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace dynkin {

namespace {

constexpr double kActivation = 1e-9;

struct SideValues {
    Vec continue_value;  // (1-q)*alpha*P v + q*g, q = opponent stop prob
    Vec stop_value;      // (1-q)*f + q*h
};

SideValues side_values(const ValidatedGame& game, int player, const Vec& v,
                       const Vec& opponent_p) {
    const auto& mine = game.payoffs(player);
    const Vec keep = Vec::Ones(game.size()) - opponent_p;
    SideValues out;
    out.continue_value = game.alpha() * keep.cwiseProduct(game.kernel() * v) +
                         opponent_p.cwiseProduct(mine.g);
    out.stop_value = keep.cwiseProduct(mine.f) + opponent_p.cwiseProduct(mine.h);
    return out;
}

}  // namespace

EquilibriumReport verify_equilibrium(const ValidatedGame& game,
                                     const StoppingProfile& p1,
                                     const StoppingProfile& p2, double tol) {
    const int n = game.size();
    EquilibriumReport rep;
    rep.p1 = p1;
    rep.p2 = p2;
    std::tie(rep.v1, rep.v2) = evaluate_payoffs(game, p1, p2);
    rep.residuals = Mat::Zero(n, kNumConditions);

    const SideValues s1 = side_values(game, 1, rep.v1, p2.p);
    const SideValues s2 = side_values(game, 2, rep.v2, p1.p);

    for (int x = 0; x < n; ++x) {
        rep.residuals(x, 0) =
            std::abs(rep.v1[x] - std::max(s1.continue_value[x], s1.stop_value[x]));
        rep.residuals(x, 1) =
            std::abs(rep.v2[x] - std::max(s2.continue_value[x], s2.stop_value[x]));
        if (p1.p[x] > kActivation) {
            rep.residuals(x, 2) = std::max(0.0, s1.continue_value[x] - s1.stop_value[x]);
        }
        if (p1.p[x] < 1.0 - kActivation) {
            rep.residuals(x, 3) = std::max(0.0, s1.stop_value[x] - s1.continue_value[x]);
        }
        if (p2.p[x] > kActivation) {
            rep.residuals(x, 4) = std::max(0.0, s2.continue_value[x] - s2.stop_value[x]);
        }
        if (p2.p[x] < 1.0 - kActivation) {
            rep.residuals(x, 5) = std::max(0.0, s2.stop_value[x] - s2.continue_value[x]);
        }
    }

    rep.max_residual = 0.0;
    rep.worst_state = 0;
    rep.worst_condition = 0;
    for (int x = 0; x < n; ++x) {
        for (int c = 0; c < kNumConditions; ++c) {
            if (rep.residuals(x, c) > rep.max_residual) {
                rep.max_residual = rep.residuals(x, c);
                rep.worst_state = x;
                rep.worst_condition = c;
            }
        }
    }
    rep.verdict = rep.max_residual < tol ? Verdict::Verified : Verdict::Failed;
    return rep;
}

std::pair<StoppingProfile, StoppingProfile> local_bimatrix_refine(
    const ValidatedGame& game, const Vec& v1, const Vec& v2) {
    const int n = game.size();
    const Vec pi_v1 = game.alpha() * (game.kernel() * v1);
    const Vec pi_v2 = game.alpha() * (game.kernel() * v2);
    Vec out1(n), out2(n);

    for (int x = 0; x < n; ++x) {
        // Cell (row, col) = (player 1 action, player 2 action), C then S.
        const double a[2][2] = {{pi_v1[x], game.g(1)[x]},
                                {game.f(1)[x], game.h(1)[x]}};
        const double b[2][2] = {{pi_v2[x], game.f(2)[x]},
                                {game.g(2)[x], game.h(2)[x]}};

        struct Candidate {
            double stop1, stop2, payoff1, payoff2;
        };
        std::vector<Candidate> found;

        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const bool row_ok = a[r][c] >= a[1 - r][c];
                const bool col_ok = b[r][c] >= b[r][1 - c];
                if (row_ok && col_ok) {
                    found.push_back({static_cast<double>(r), static_cast<double>(c),
                                     a[r][c], b[r][c]});
                }
            }
        }

        const double da = a[0][0] - a[0][1] - a[1][0] + a[1][1];
        const double db = b[0][0] - b[0][1] - b[1][0] + b[1][1];
        if (da != 0.0 && db != 0.0) {
            const double cont1 = (b[1][1] - b[1][0]) / db;  // makes player 2 indifferent
            const double cont2 = (a[1][1] - a[0][1]) / da;  // makes player 1 indifferent
            if (cont1 > 0.0 && cont1 < 1.0 && cont2 > 0.0 && cont2 < 1.0) {
                // Each player is indifferent, so either pure action prices
                // the mixed cell.
                const double pay1 = cont2 * a[0][0] + (1 - cont2) * a[0][1];
                const double pay2 = cont1 * b[0][0] + (1 - cont1) * b[1][0];
                found.push_back({1.0 - cont1, 1.0 - cont2, pay1, pay2});
            }
        }

        if (found.empty()) {
            // Degenerate ties only; keep a stop/stop fallback.
            found.push_back({1.0, 1.0, a[1][1], b[1][1]});
        }
        const auto best = std::max_element(
            found.begin(), found.end(), [](const Candidate& l, const Candidate& r) {
                if (l.payoff1 != r.payoff1) return l.payoff1 < r.payoff1;
                if (l.payoff2 != r.payoff2) return l.payoff2 < r.payoff2;
                if (l.stop1 != r.stop1) return l.stop1 < r.stop1;
                return l.stop2 < r.stop2;
            });
        out1[x] = best->stop1;
        out2[x] = best->stop2;
    }
    return {StoppingProfile{std::move(out1)}, StoppingProfile{std::move(out2)}};
}

namespace {

StoppingProfile select_response(const BestResponseConstraint& cons,
                                const StoppingProfile& current) {
    Vec p = current.p;
    for (int x = 0; x < p.size(); ++x) {
        if (cons.tags[x] == ResponseTag::MustStop) p[x] = 1.0;
        if (cons.tags[x] == ResponseTag::MustContinue) p[x] = 0.0;
    }
    return StoppingProfile{std::move(p)};
}

// Newton refinement of the indifference system on a guessed support:
// every freed probability must make its owner indifferent between
// stopping and continuing. Frozen entries are snapped to their nearest
// endpoint; a wrong support guess simply fails verification later.
std::optional<std::pair<StoppingProfile, StoppingProfile>> indifference_polish(
    const ValidatedGame& game, const StoppingProfile& init1,
    const StoppingProfile& init2, const std::vector<std::array<bool, 2>>& free_slot) {
    const int n = game.size();
    constexpr double interior = 1e-6;

    std::vector<std::pair<int, int>> slots;  // (player index 0/1, state)
    for (int x = 0; x < n; ++x) {
        if (free_slot[x][0]) slots.push_back({0, x});
    }
    for (int x = 0; x < n; ++x) {
        if (free_slot[x][1]) slots.push_back({1, x});
    }
    if (slots.empty()) return std::nullopt;

    Vec q1 = init1.p, q2 = init2.p;
    for (int x = 0; x < n; ++x) {
        if (!free_slot[x][0]) q1[x] = std::round(q1[x]);
        if (!free_slot[x][1]) q2[x] = std::round(q2[x]);
    }
    for (const auto& [player, x] : slots) {
        double& entry = (player == 0 ? q1 : q2)[x];
        if (entry <= interior || entry >= 1.0 - interior) {
            entry = std::clamp(entry, 0.25, 0.75);
        }
    }

    const auto gaps = [&](const std::vector<std::pair<int, int>>& active,
                          const Vec& vars) -> std::optional<Vec> {
        Vec r1 = q1, r2 = q2;
        for (std::size_t i = 0; i < active.size(); ++i) {
            (active[i].first == 0 ? r1 : r2)[active[i].second] = vars[i];
        }
        std::pair<Vec, Vec> values;
        try {
            values = evaluate_payoffs(game, StoppingProfile{r1}, StoppingProfile{r2});
        } catch (const SingularSystem&) {
            return std::nullopt;
        }
        const SideValues s1 = side_values(game, 1, values.first, r2);
        const SideValues s2 = side_values(game, 2, values.second, r1);
        Vec out(active.size());
        for (std::size_t i = 0; i < active.size(); ++i) {
            const auto& side = active[i].first == 0 ? s1 : s2;
            out[i] = side.continue_value[active[i].second] -
                     side.stop_value[active[i].second];
        }
        return out;
    };

    // A slot pinned to a clamp (or defeating the Jacobian) wants to be
    // pure: snap it toward the side its gap prefers, drop it from the
    // unknowns, and re-solve the remaining indifference system.
    const double scale = std::max(1.0, game.max_abs_payoff());
    const int max_passes = 2 * static_cast<int>(slots.size()) + 2;
    for (int pass = 0; pass < max_passes && !slots.empty(); ++pass) {
        const int m = static_cast<int>(slots.size());
        Vec u(m);
        for (int i = 0; i < m; ++i) {
            u[i] = (slots[i].first == 0 ? q1 : q2)[slots[i].second];
        }

        bool singular = false;
        for (int step = 0; step < 30 && !singular; ++step) {
            const auto f0 = gaps(slots, u);
            if (!f0) return std::nullopt;
            if (f0->cwiseAbs().maxCoeff() < 1e-13 * scale) break;

            Mat jac(m, m);
            const double delta = 1e-7;
            for (int j = 0; j < m; ++j) {
                Vec shifted = u;
                shifted[j] = std::min(1.0 - interior, u[j] + delta);
                const auto fj = gaps(slots, shifted);
                if (!fj) return std::nullopt;
                jac.col(j) = (*fj - *f0) / (shifted[j] - u[j]);
            }
            Vec du = jac.partialPivLu().solve(-*f0);
            if (!du.allFinite()) {
                singular = true;
                break;
            }
            const double widest = du.cwiseAbs().maxCoeff();
            if (widest > 0.25) du *= 0.25 / widest;
            Vec next = u + du;
            for (int i = 0; i < m; ++i) {
                next[i] = std::clamp(next[i], interior, 1.0 - interior);
            }
            if ((next - u).cwiseAbs().maxCoeff() < 1e-15) break;
            u = next;
        }

        for (int i = 0; i < m; ++i) {
            (slots[i].first == 0 ? q1 : q2)[slots[i].second] = u[i];
        }

        if (singular) {
            const auto f = gaps(slots, u);
            if (!f) return std::nullopt;
            int worst = 0;
            for (int i = 1; i < m; ++i) {
                if (std::abs((*f)[i]) > std::abs((*f)[worst])) worst = i;
            }
            (slots[worst].first == 0 ? q1 : q2)[slots[worst].second] =
                (*f)[worst] > 0.0 ? 0.0 : 1.0;
            slots.erase(slots.begin() + worst);
            continue;
        }

        std::vector<std::pair<int, int>> keep;
        for (int i = 0; i < m; ++i) {
            double& entry = (slots[i].first == 0 ? q1 : q2)[slots[i].second];
            if (u[i] <= 2.0 * interior) {
                entry = 0.0;
            } else if (u[i] >= 1.0 - 2.0 * interior) {
                entry = 1.0;
            } else {
                entry = u[i];
                keep.push_back(slots[i]);
            }
        }
        if (static_cast<int>(keep.size()) == m) break;
        slots = std::move(keep);
    }
    return std::make_pair(StoppingProfile{std::move(q1)}, StoppingProfile{std::move(q2)});
}

}  // namespace

SearchResult best_response_search(const ValidatedGame& game,
                                  const StoppingProfile& init1,
                                  const StoppingProfile& init2,
                                  const SearchOptions& options) {
    const int n = game.size();
    SearchResult result;
    bool have_best = false;

    const auto track = [&](const EquilibriumReport& rep) -> bool {
        if (!have_best || rep.max_residual < result.report.max_residual) {
            result.report = rep;
            result.report.iterations = result.iterations;
            have_best = true;
        }
        return rep.verdict == Verdict::Verified;
    };
    const auto consider = [&](const StoppingProfile& c1,
                              const StoppingProfile& c2) -> bool {
        return track(verify_equilibrium(game, c1, c2, options.tol));
    };

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int attempt = 0; attempt <= options.restarts; ++attempt) {
        StoppingProfile p1 = init1;
        StoppingProfile p2 = init2;
        if (attempt > 0) {
            Vec r1(n), r2(n);
            for (int x = 0; x < n; ++x) r1[x] = unit(rng);
            for (int x = 0; x < n; ++x) r2[x] = unit(rng);
            p1 = StoppingProfile{std::move(r1)};
            p2 = StoppingProfile{std::move(r2)};
        }
        result.restarts_used = attempt;
        if (consider(p1, p2)) {
            result.converged = true;
            return result;
        }

        for (int round = 1; round <= options.max_iter; ++round) {
            ++result.iterations;

            const auto aux1 = build_auxiliary(game, 1, p2);
            const auto aux2 = build_auxiliary(game, 2, p1);
            const auto val1 = solve_wald_bellman(aux1, options.solver_tol);
            const auto val2 = solve_wald_bellman(aux2, options.solver_tol);
            const auto cons1 = classify_best_response(aux1, val1, options.solver_tol);
            const auto cons2 = classify_best_response(aux2, val2, options.solver_tol);
            const StoppingProfile prime1 = select_response(cons1, p1);
            const StoppingProfile prime2 = select_response(cons2, p2);

            if (consider(prime1, prime2)) {
                result.converged = true;
                return result;
            }

            p1.p = (1.0 - options.damping) * p1.p + options.damping * prime1.p;
            p2.p = (1.0 - options.damping) * p2.p + options.damping * prime2.p;
            if (consider(p1, p2)) {
                result.converged = true;
                return result;
            }

            if (round % 10 == 0) {
                // Polish with the per-state bimatrix map until it verifies
                // or stops improving; plain damping cannot settle mixed
                // anti-coordination states.
                EquilibriumReport current = verify_equilibrium(game, p1, p2, options.tol);
                track(current);
                for (int polish = 0; polish < 40; ++polish) {
                    auto [c1, c2] = local_bimatrix_refine(game, current.v1, current.v2);
                    EquilibriumReport refined =
                        verify_equilibrium(game, c1, c2, options.tol);
                    if (track(refined)) {
                        result.converged = true;
                        return result;
                    }
                    if (refined.max_residual >= current.max_residual) break;
                    p1 = std::move(c1);
                    p2 = std::move(c2);
                    current = std::move(refined);
                }
            }
        }

        // The attempt stalled; solve the indifference system exactly on
        // supports suggested by the best candidate: first its own
        // interior entries, then with every violating state freed for
        // both players.
        if (have_best) {
            constexpr double interior = 1e-6;
            const StoppingProfile seed1 = result.report.p1;
            const StoppingProfile seed2 = result.report.p2;
            std::vector<std::array<bool, 2>> own(n, {false, false});
            std::vector<std::array<bool, 2>> widened(n, {false, false});
            for (int x = 0; x < n; ++x) {
                own[x][0] = seed1.p[x] > interior && seed1.p[x] < 1.0 - interior;
                own[x][1] = seed2.p[x] > interior && seed2.p[x] < 1.0 - interior;
                widened[x] = own[x];
                if (result.report.residuals.row(x).maxCoeff() > options.tol) {
                    widened[x] = {true, true};
                }
            }
            for (const auto& mask : {own, widened}) {
                const auto polished = indifference_polish(game, seed1, seed2, mask);
                if (polished && consider(polished->first, polished->second)) {
                    result.converged = true;
                    return result;
                }
            }
        }
    }
    result.converged = false;
    return result;
}

}  // namespace dynkin
