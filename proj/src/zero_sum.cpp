#include "dynkin/zero_sum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynkin {

namespace {

void require_zero_sum(const ValidatedGame& game) {
    if (!classify_game(game).is_zero_sum) {
        throw PreconditionViolated("game is not zero-sum", {});
    }
}

std::vector<int> med_condition_witnesses(const ValidatedGame& game) {
    std::vector<int> witnesses;
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);
    for (int x = 0; x < game.size(); ++x) {
        if (med(f[x], h[x], g[x]) != h[x]) witnesses.push_back(x);
    }
    return witnesses;
}

std::string witness_labels(const ValidatedGame& game, const std::vector<int>& states) {
    std::ostringstream out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        out << (i ? ", " : "") << "'" << game.label(states[i]) << "'";
    }
    return out.str();
}

}  // namespace

LocalGameSolution solve_local_matrix_game(double cc, double cs, double sc,
                                          double ss) {
    const double a[2][2] = {{cc, cs}, {sc, ss}};  // row/col 0 = continue, 1 = stop

    // Saddle preference: both stop, then row stop, then column stop.
    constexpr int order[4][2] = {{1, 1}, {1, 0}, {0, 1}, {0, 0}};
    for (const auto& cell : order) {
        const int r = cell[0], c = cell[1];
        if (a[r][c] >= a[1 - r][c] && a[r][c] <= a[r][1 - c]) {
            LocalGameSolution out;
            out.value = a[r][c];
            out.row_continue = r == 0 ? 1.0 : 0.0;
            out.col_continue = c == 0 ? 1.0 : 0.0;
            out.pure = true;
            return out;
        }
    }

    const double denom = cc - cs - sc + ss;
    if (denom == 0.0) {
        // A zero denominator forces a pure saddle, handled above.
        throw DegenerateGame("2x2 game has no saddle and a zero mixed denominator");
    }
    LocalGameSolution out;
    out.row_continue = (ss - sc) / denom;
    out.col_continue = (ss - cs) / denom;
    out.value = (cc * ss - cs * sc) / denom;
    out.pure = false;
    constexpr double slop = 1e-9;
    if (out.row_continue < -slop || out.row_continue > 1.0 + slop ||
        out.col_continue < -slop || out.col_continue > 1.0 + slop) {
        throw DegenerateGame("mixed 2x2 solution fell outside [0,1]");
    }
    out.row_continue = std::clamp(out.row_continue, 0.0, 1.0);
    out.col_continue = std::clamp(out.col_continue, 0.0, 1.0);
    return out;
}

Vec med_value_iteration(const ValidatedGame& game, double tol, int* iterations) {
    require_zero_sum(game);
    if (auto witnesses = med_condition_witnesses(game); !witnesses.empty()) {
        throw MedConditionViolated(
            "h is not the middle payoff at state(s) " + witness_labels(game, witnesses),
            std::move(witnesses));
    }

    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);
    const double alpha = game.alpha();
    const double stop_change = tol * (1.0 - alpha);

    Vec v = f.cwiseMin(h);
    for (int it = 1; it <= 1000000; ++it) {
        const Vec pv = alpha * (game.kernel() * v);
        double change = 0.0;
        Vec next(game.size());
        for (int x = 0; x < game.size(); ++x) {
            next[x] = f[x] < g[x] ? med(f[x], pv[x], g[x]) : h[x];
            change = std::max(change, std::abs(next[x] - v[x]));
        }
        v = std::move(next);
        if (iterations) *iterations = it;
        if (change < stop_change) break;
    }
    return v;
}

namespace {

struct AssemblyState {
    double p1 = 0.0, p2 = 0.0;
    // Which slots the case leaves free, and their flipped endpoints.
    bool p1_free = false, p2_free = false, linked = false;
};

AssemblyState dispatch_case(double f, double g, double h, double pv, double v,
                            double tol) {
    (void)h;
    AssemblyState s;
    if (f > g) {
        s.p1 = 1.0;
        s.p2 = 1.0;
    } else if (f == g) {
        if (pv < v - tol) {
            s.p1 = 1.0;
            s.p2 = 1.0;
            s.p2_free = true;
        } else if (pv > v + tol) {
            s.p1 = 1.0;
            s.p2 = 1.0;
            s.p1_free = true;
        } else {
            s.p1 = 0.0;
            s.p2 = 0.0;
            s.p1_free = s.p2_free = true;
            s.linked = true;  // the case requires p1 = p2
        }
    } else {
        if (std::abs(pv - g) <= tol) {
            s.p1 = 0.0;
            s.p2 = 0.0;
            s.p2_free = true;
        } else if (std::abs(pv - f) <= tol) {
            s.p1 = 0.0;
            s.p2 = 0.0;
            s.p1_free = true;
        } else if (pv > g) {
            s.p1 = 0.0;
            s.p2 = 1.0;
        } else if (pv < f) {
            s.p1 = 1.0;
            s.p2 = 0.0;
        } else {
            s.p1 = 0.0;
            s.p2 = 0.0;
        }
    }
    return s;
}

}  // namespace

std::pair<StoppingProfile, StoppingProfile> assemble_pure_profiles(
    const ValidatedGame& game, const Vec& value, double guard_tol) {
    require_zero_sum(game);
    if (auto witnesses = med_condition_witnesses(game); !witnesses.empty()) {
        throw MedConditionViolated(
            "h is not the middle payoff at state(s) " + witness_labels(game, witnesses),
            std::move(witnesses));
    }
    const int n = game.size();
    const Vec pv = game.alpha() * (game.kernel() * value);

    std::vector<AssemblyState> states(n);
    Vec p1(n), p2(n);
    for (int x = 0; x < n; ++x) {
        states[x] = dispatch_case(game.f(1)[x], game.g(1)[x], game.h(1)[x], pv[x],
                                  value[x], guard_tol);
        p1[x] = states[x].p1;
        p2[x] = states[x].p2;
    }

    constexpr double verify_tol = 1e-8;
    auto profiles = std::make_pair(game.make_profile(p1), game.make_profile(p2));
    EquilibriumReport rep =
        verify_equilibrium(game, profiles.first, profiles.second, verify_tol);
    if (rep.verdict == Verdict::Verified) return profiles;

    // Retry with the opposite endpoint at failing states that had a free slot.
    bool flipped = false;
    for (int x = 0; x < n; ++x) {
        if (rep.residuals.row(x).maxCoeff() < verify_tol) continue;
        const AssemblyState& s = states[x];
        if (s.linked) {
            p1[x] = p2[x] = 1.0 - p1[x];
            flipped = true;
        } else {
            if (s.p1_free) {
                p1[x] = 1.0 - p1[x];
                flipped = true;
            }
            if (s.p2_free) {
                p2[x] = 1.0 - p2[x];
                flipped = true;
            }
        }
    }
    if (flipped) {
        profiles = std::make_pair(game.make_profile(p1), game.make_profile(p2));
        rep = verify_equilibrium(game, profiles.first, profiles.second, verify_tol);
        if (rep.verdict == Verdict::Verified) return profiles;
    }
    std::ostringstream msg;
    msg << "no case assembly verified; worst residual " << rep.max_residual
        << " at state '" << game.label(rep.worst_state)
        << "' (the value function likely does not solve the med equation)";
    throw NoCaseMatched(msg.str());
}

ZeroSumSolution shapley_solve(const ValidatedGame& game, double tol, int max_iter,
                              double verify_tol) {
    require_zero_sum(game);
    const int n = game.size();
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);
    const double alpha = game.alpha();
    const double stop_change = tol * (1.0 - alpha) / (2.0 * alpha);

    ZeroSumSolution out;
    out.method = ZeroSumMethod::Shapley;

    Vec v = f.cwiseMin(h);
    bool converged = false;
    for (int it = 1; it <= max_iter; ++it) {
        const Vec pv = alpha * (game.kernel() * v);
        Vec next(n);
        for (int x = 0; x < n; ++x) {
            next[x] = solve_local_matrix_game(pv[x], g[x], f[x], h[x]).value;
        }
        const double change = (next - v).cwiseAbs().maxCoeff();
        v = std::move(next);
        out.iterations = it;
        if (change < stop_change) {
            converged = true;
            break;
        }
    }

    const Vec pv = alpha * (game.kernel() * v);
    Vec p1(n), p2(n);
    double residual = 0.0;
    for (int x = 0; x < n; ++x) {
        const auto local = solve_local_matrix_game(pv[x], g[x], f[x], h[x]);
        p1[x] = 1.0 - local.row_continue;
        p2[x] = 1.0 - local.col_continue;
        residual = std::max(residual, std::abs(local.value - v[x]));
    }
    out.value = v;
    out.residual = residual;
    out.p1 = game.make_profile(p1);
    out.p2 = game.make_profile(p2);
    out.pure = out.p1.pure() && out.p2.pure();
    out.verification = verify_equilibrium(game, out.p1, out.p2, verify_tol);
    if (!converged) {
        out.status = ZeroSumSolution::Status::MaxIterExceeded;
    } else if (out.verification.verdict != Verdict::Verified) {
        out.status = ZeroSumSolution::Status::VerificationFailed;
    } else {
        out.status = ZeroSumSolution::Status::Ok;
    }
    return out;
}

ZeroSumSolution solve_zero_sum(const ValidatedGame& game, double tol, int max_iter,
                               double verify_tol) {
    if (classify_game(game).med_condition) {
        ZeroSumSolution out;
        out.method = ZeroSumMethod::MedIteration;
        out.value = med_value_iteration(game, tol, &out.iterations);
        auto [p1, p2] = assemble_pure_profiles(game, out.value);
        out.p1 = std::move(p1);
        out.p2 = std::move(p2);
        out.pure = true;
        out.verification = verify_equilibrium(game, out.p1, out.p2, verify_tol);
        out.status = out.verification.verdict == Verdict::Verified
                         ? ZeroSumSolution::Status::Ok
                         : ZeroSumSolution::Status::VerificationFailed;
        return out;
    }
    return shapley_solve(game, tol, max_iter, verify_tol);
}

int classify_pure_case(double f, double g, double h, double a_pi_v, double tol) {
    if (g <= h + tol && h <= f + tol) return 1;
    if (a_pi_v <= f + tol && f <= h + tol) return 2;
    if (h <= g + tol && g <= a_pi_v + tol) return 3;
    if (f <= a_pi_v + tol && a_pi_v <= g + tol) return 4;
    return 0;
}

PureExistenceResult pure_existence_check(const ValidatedGame& game,
                                         const Vec& value, double tol) {
    require_zero_sum(game);
    const int n = game.size();
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);
    const Vec pv = game.alpha() * (game.kernel() * value);

    PureExistenceResult out;
    out.per_state.resize(n);
    out.exists = true;
    for (int x = 0; x < n; ++x) {
        const bool upper = std::max(h[x], pv[x]) >= std::min(f[x], g[x]) - tol;
        const bool lower = std::min(h[x], pv[x]) <= std::max(f[x], g[x]) + tol;
        out.per_state[x] = upper && lower;
        out.exists = out.exists && out.per_state[x];
    }
    if (!out.exists) return out;

    Vec p1(n), p2(n);
    for (int x = 0; x < n; ++x) {
        switch (classify_pure_case(f[x], g[x], h[x], pv[x], 2.0 * tol)) {
            case 1: p1[x] = 1.0; p2[x] = 1.0; break;
            case 2: p1[x] = 1.0; p2[x] = 0.0; break;
            case 3: p1[x] = 0.0; p2[x] = 1.0; break;
            case 4: p1[x] = 0.0; p2[x] = 0.0; break;
            default:
                throw NoCaseMatched("existence held but no construction case at state '" +
                                    game.label(x) + "'");
        }
    }
    out.profiles = std::make_pair(game.make_profile(p1), game.make_profile(p2));
    out.verification = verify_equilibrium(game, out.profiles->first,
                                          out.profiles->second);
    return out;
}

PureDiagnostics pure_nonexistence_diagnostic(const ValidatedGame& game, double tol) {
    require_zero_sum(game);
    const int n = game.size();
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);

    PureDiagnostics out;
    std::vector<bool> in_m1(n), in_m2(n);
    for (int x = 0; x < n; ++x) {
        in_m1[x] = std::max(f[x], g[x]) < h[x];
        in_m2[x] = h[x] < std::min(f[x], g[x]);
        if (in_m1[x]) out.m1.push_back(x);
        if (in_m2[x]) out.m2.push_back(x);
    }

    constexpr double margin = 1e-9;
    if (!out.m1.empty()) {
        Vec k1(n);
        for (int x = 0; x < n; ++x) k1[x] = in_m1[x] ? f[x] : std::min(f[x], h[x]);
        out.v_m1 = constrained_stopping_value(game, in_m1, k1, StoppingMode::Max, tol);
        for (int x : out.m1) {
            if (out.v_m1[x] > std::max(f[x], g[x]) + margin) {
                out.witnesses_m1.push_back(x);
            }
        }
    }
    if (!out.m2.empty()) {
        Vec k2(n);
        for (int x = 0; x < n; ++x) k2[x] = in_m2[x] ? g[x] : std::max(g[x], h[x]);
        out.v_m2 = constrained_stopping_value(game, in_m2, k2, StoppingMode::Min, tol);
        for (int x : out.m2) {
            if (out.v_m2[x] < std::min(f[x], g[x]) - margin) {
                out.witnesses_m2.push_back(x);
            }
        }
    }
    out.pure_impossible = !out.witnesses_m1.empty() || !out.witnesses_m2.empty();
    return out;
}

}  // namespace dynkin
