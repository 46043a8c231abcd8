#include "dynkin/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynkin {

namespace {

void require_symmetric(const ValidatedGame& game) {
    if (!classify_game(game).is_symmetric) {
        throw PreconditionViolated("game is not symmetric", {});
    }
}

std::string witness_labels(const ValidatedGame& game, const std::vector<int>& states) {
    std::ostringstream out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        out << (i ? ", " : "") << "'" << game.label(states[i]) << "'";
    }
    return out.str();
}

}  // namespace

Vec optimal_stopping_value(const ValidatedGame& game, double tol) {
    const Vec& f = game.f(1);
    const double alpha = game.alpha();
    const double stop_change = tol * (1.0 - alpha) / (2.0 * alpha);

    Vec v = f;
    for (int it = 0; it < 1000000; ++it) {
        Vec next = (alpha * (game.kernel() * v)).cwiseMax(f);
        const double change = (next - v).cwiseAbs().maxCoeff();
        v = std::move(next);
        if (change < stop_change) break;
    }
    return v;
}

StoppingProfile symmetric_profile(const ValidatedGame& game, const Vec& value,
                                  double tol) {
    require_symmetric(game);
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    if ((f.array() != game.h(1).array()).any()) {
        throw PreconditionViolated("symmetric_profile requires f = h", {});
    }
    const Vec pv = game.alpha() * (game.kernel() * value);

    Vec p(game.size());
    for (int x = 0; x < game.size(); ++x) {
        if (std::abs(value[x] - std::max(f[x], pv[x])) > tol) {
            std::ostringstream msg;
            msg << "value at state '" << game.label(x)
                << "' does not satisfy its stopping equation";
            throw CaseGuardFailure(msg.str());
        }
        if (std::abs(pv[x] - f[x]) <= tol) {
            p[x] = 0.0;  // indifferent against a continuing opponent
        } else if (pv[x] < f[x]) {
            // Stopping strictly optimal; mix exactly when being preempted
            // pays more than stopping together.
            p[x] = g[x] > f[x] ? (f[x] - pv[x]) / (g[x] - pv[x]) : 1.0;
        } else {
            p[x] = 0.0;
        }
    }
    return game.make_profile(std::move(p));
}

SymmetricSolution war_of_attrition_profile(const ValidatedGame& game) {
    require_symmetric(game);
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);
    const Vec pf = game.alpha() * (game.kernel() * f);

    std::vector<int> witnesses;
    for (int x = 0; x < game.size(); ++x) {
        if (!(pf[x] < f[x]) || !(g[x] > f[x]) || f[x] != h[x]) {
            witnesses.push_back(x);
        }
    }
    if (!witnesses.empty()) {
        throw PreconditionViolated(
            "war of attrition needs alpha*Pf < f and g > f = h; violated at state(s) " +
                witness_labels(game, witnesses),
            witnesses);
    }

    SymmetricSolution out;
    out.method = SymmetricMethod::WarOfAttrition;
    Vec p(game.size());
    for (int x = 0; x < game.size(); ++x) {
        p[x] = (f[x] - pf[x]) / (g[x] - pf[x]);
    }
    out.p = game.make_profile(std::move(p));
    out.value = f;
    out.verification = verify_equilibrium(game, out.p, out.p);
    out.converged = out.verification.verdict == Verdict::Verified;
    return out;
}

namespace {

// Smallest symmetric-equilibrium stop probability of the local 2x2 game
// with row payoffs {{cc, cs}, {sc, ss}} shared by both players.
double symmetric_local_probability(double cc, double cs, double sc, double ss) {
    double best = 2.0;
    if (cc >= sc) best = std::min(best, 0.0);   // continue replies to continue
    if (ss >= cs) best = std::min(best, 1.0);   // stop replies to stop
    const double denom = (cc - sc) + (ss - cs);
    if (denom != 0.0) {
        const double p = (cc - sc) / denom;
        if (p > 0.0 && p < 1.0) best = std::min(best, p);
    }
    // A 2x2 symmetric game always has a symmetric equilibrium; ties above
    // can only leave best unset when cc < sc and ss < cs, which forces the
    // interior point.
    return best <= 1.0 ? best : 0.5;
}

}  // namespace

SymmetricSolution symmetric_fixed_point(const ValidatedGame& game,
                                        const SymmetricSearchOptions& options) {
    require_symmetric(game);
    const int n = game.size();
    const Vec& f = game.f(1);
    const Vec& g = game.g(1);
    const Vec& h = game.h(1);

    SymmetricSolution out;
    out.method = SymmetricMethod::FixedPoint;
    bool have_best = false;

    const auto consider = [&](const StoppingProfile& candidate) -> EquilibriumReport {
        EquilibriumReport rep =
            verify_equilibrium(game, candidate, candidate, options.tol);
        if (!have_best || rep.max_residual < out.verification.max_residual) {
            out.verification = rep;
            out.p = candidate;
            out.value = rep.v1;
            have_best = true;
        }
        return rep;
    };

    StoppingProfile p = game.make_profile(Vec::Zero(n));
    const int primary_rounds = std::min(options.max_iter, 200);
    for (int round = 1; round <= primary_rounds; ++round) {
        out.iterations = round;
        const auto aux = build_auxiliary(game, 1, p);
        const auto val = solve_wald_bellman(aux, options.solver_tol);
        const auto cons = classify_best_response(aux, val, options.solver_tol);
        const Vec pv = game.alpha() * (game.kernel() * val.v_c);

        Vec next(n), local(n);
        for (int x = 0; x < n; ++x) {
            local[x] = symmetric_local_probability(pv[x], g[x], f[x], h[x]);
            switch (cons.tags[x]) {
                case ResponseTag::MustStop: next[x] = 1.0; break;
                case ResponseTag::MustContinue: next[x] = 0.0; break;
                case ResponseTag::Indifferent: next[x] = local[x]; break;
            }
        }
        const StoppingProfile prime = game.make_profile(next);
        if (consider(prime).verdict == Verdict::Verified) {
            out.converged = true;
            return out;
        }
        p.p = (1.0 - options.damping) * p.p + options.damping * prime.p;
        const EquilibriumReport damped = consider(p);
        if (damped.verdict == Verdict::Verified) {
            out.converged = true;
            return out;
        }

        // Damping alone orbits interior mixed points without entering
        // the indifference window; the per-state local-game candidate is
        // a contraction there, so adopt it whenever it does better.
        const StoppingProfile polished = game.make_profile(local);
        const EquilibriumReport rep = consider(polished);
        if (rep.verdict == Verdict::Verified) {
            out.converged = true;
            return out;
        }
        if (rep.max_residual < damped.max_residual) p = polished;
    }

    // Equilibria that mix jointly across several states defeat per-state
    // replies outright. Projected gap descent moves each probability
    // against its own stop/continue gap; its fixed points are exactly the
    // symmetric equilibria, and the continuous steps let coupled states
    // settle together.
    int budget = options.max_iter - primary_rounds;
    const double scale = std::max(1.0, game.max_abs_payoff());
    for (const double eta : {0.2, 0.05}) {
        for (const double start : {0.5, 0.0, 1.0}) {
            int steps = budget / 6;
            if (steps <= 0) break;
            p = game.make_profile(Vec::Constant(n, start));
            for (int k = 1; k <= steps; ++k) {
                ++out.iterations;
                const auto [v1, v2] = evaluate_payoffs(game, p, p);
                const Vec pv = game.alpha() * (game.kernel() * v1);
                Vec next(n);
                for (int x = 0; x < n; ++x) {
                    const double cont = (1 - p.p[x]) * pv[x] + p.p[x] * g[x];
                    const double stop = (1 - p.p[x]) * f[x] + p.p[x] * h[x];
                    next[x] = std::clamp(p.p[x] - eta * (cont - stop) / scale, 0.0, 1.0);
                }
                p = game.make_profile(next);
                if (k % 10 == 0 || k == steps) {
                    if (consider(p).verdict == Verdict::Verified) {
                        out.converged = true;
                        return out;
                    }
                }
            }
        }
    }
    out.converged = false;
    return out;
}

SymmetricSolution solve_symmetric(const ValidatedGame& game,
                                  const SymmetricSearchOptions& options) {
    require_symmetric(game);
    if (classify_game(game).f_equals_h) {
        SymmetricSolution out;
        out.method = SymmetricMethod::ClosedForm;
        out.value = optimal_stopping_value(game, options.solver_tol);
        out.p = symmetric_profile(game, out.value, options.solver_tol);
        out.verification = verify_equilibrium(game, out.p, out.p, options.tol);
        out.converged = out.verification.verdict == Verdict::Verified;
        out.value = out.verification.v1;
        return out;
    }
    return symmetric_fixed_point(game, options);
}

}  // namespace dynkin
