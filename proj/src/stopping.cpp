#include "dynkin/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace dynkin {

AuxiliaryProblem build_auxiliary(const ValidatedGame& game, int player,
                                 const StoppingProfile& opponent) {
    if (opponent.p.size() != game.size()) {
        throw std::invalid_argument("opponent profile length mismatch");
    }
    AuxiliaryProblem aux;
    aux.game = &game;
    aux.player = player;
    aux.opponent_p = opponent.p;
    const auto& mine = game.payoffs(player);
    const Vec keep = Vec::Ones(game.size()) - opponent.p;
    aux.continue_reward = keep.cwiseProduct(mine.f) + opponent.p.cwiseProduct(mine.h);
    aux.absorbed_reward = mine.g;
    return aux;
}

AuxiliaryValue solve_wald_bellman(const AuxiliaryProblem& aux, double tol,
                                  int max_iter) {
    const ValidatedGame& game = *aux.game;
    const double alpha = game.alpha();
    const Vec keep = Vec::Ones(game.size()) - aux.opponent_p;
    const Vec absorbed = aux.opponent_p.cwiseProduct(aux.absorbed_reward);

    const auto continuation_of = [&](const Vec& v) -> Vec {
        return alpha * keep.cwiseProduct(game.kernel() * v) + absorbed;
    };

    const double stop_change = tol * (1.0 - alpha) / (2.0 * alpha);
    AuxiliaryValue out;
    Vec v = aux.continue_reward;
    for (int it = 1; it <= max_iter; ++it) {
        const Vec cont = continuation_of(v);
        const Vec next = cont.cwiseMax(aux.continue_reward);
        const double change = (next - v).cwiseAbs().maxCoeff();
        v = next;
        if (change < stop_change) {
            out.converged = true;
            out.iterations = it;
            break;
        }
        out.iterations = it;
    }
    out.v_c = v;
    out.v_s = aux.absorbed_reward;
    out.continuation = continuation_of(v);
    out.residual =
        (out.continuation.cwiseMax(aux.continue_reward) - v).cwiseAbs().maxCoeff();
    return out;
}

BestResponseConstraint classify_best_response(const AuxiliaryProblem& aux,
                                              const AuxiliaryValue& value,
                                              double tol) {
    BestResponseConstraint out;
    const int n = static_cast<int>(value.v_c.size());
    out.tags.resize(n);
    for (int x = 0; x < n; ++x) {
        const double gap = value.continuation[x] - aux.continue_reward[x];
        if (gap < -tol) {
            out.tags[x] = ResponseTag::MustStop;
        } else if (gap > tol) {
            out.tags[x] = ResponseTag::MustContinue;
        } else {
            out.tags[x] = ResponseTag::Indifferent;
        }
    }
    return out;
}

BestResponseCheck is_best_response(const StoppingProfile& profile,
                                   const BestResponseConstraint& constraints) {
    if (profile.p.size() != static_cast<Eigen::Index>(constraints.tags.size())) {
        throw std::invalid_argument("profile/constraint length mismatch");
    }
    BestResponseCheck out;
    for (int x = 0; x < profile.p.size(); ++x) {
        const bool bad =
            (constraints.tags[x] == ResponseTag::MustStop && profile.p[x] != 1.0) ||
            (constraints.tags[x] == ResponseTag::MustContinue && profile.p[x] != 0.0);
        if (bad) out.violations.push_back(x);
    }
    out.ok = out.violations.empty();
    return out;
}

std::pair<Vec, Vec> evaluate_payoffs(const ValidatedGame& game,
                                     const StoppingProfile& p1,
                                     const StoppingProfile& p2) {
    const int n = game.size();
    if (p1.p.size() != n || p2.p.size() != n) {
        throw std::invalid_argument("profile length mismatch");
    }
    const Vec q1 = p1.p;
    const Vec q2 = p2.p;
    const Vec k1 = Vec::Ones(n) - q1;
    const Vec k2 = Vec::Ones(n) - q2;
    const Vec both_continue = k1.cwiseProduct(k2);

    // I - alpha * diag((1-p1)(1-p2)) * P is invertible: the subtracted part
    // has spectral radius <= alpha < 1.
    Mat system = Mat::Identity(n, n) -
                 game.alpha() * both_continue.asDiagonal() * game.kernel();
    Eigen::PartialPivLU<Mat> lu(system);

    const auto solve_for = [&](const PayoffTriple& mine, const Vec& my_p,
                               const Vec& their_p) -> Vec {
        const Vec my_keep = Vec::Ones(n) - my_p;
        const Vec rhs = my_p.cwiseProduct(their_p).cwiseProduct(mine.h) +
                        my_p.cwiseProduct(Vec::Ones(n) - their_p).cwiseProduct(mine.f) +
                        my_keep.cwiseProduct(their_p).cwiseProduct(mine.g);
        Vec v = lu.solve(rhs);
        const double scale = rhs.cwiseAbs().maxCoeff() + v.cwiseAbs().maxCoeff() + 1.0;
        if (!v.allFinite() ||
            (system * v - rhs).cwiseAbs().maxCoeff() > 1e-8 * scale) {
            throw SingularSystem("payoff evaluation system is singular");
        }
        return v;
    };

    return {solve_for(game.payoffs(1), q1, q2), solve_for(game.payoffs(2), q2, q1)};
}

Vec constrained_stopping_value(const ValidatedGame& game,
                               const std::vector<bool>& region, const Vec& reward,
                               StoppingMode mode, double tol, int max_iter) {
    const int n = game.size();
    if (static_cast<int>(region.size()) != n || reward.size() != n) {
        throw std::invalid_argument("region/reward length mismatch");
    }
    bool any = false;
    for (bool b : region) any = any || b;
    if (!any) throw std::invalid_argument("region must be non-empty");

    const double alpha = game.alpha();
    const double stop_change = tol * (1.0 - alpha) / (2.0 * alpha);
    Vec v = reward;
    for (int it = 0; it < max_iter; ++it) {
        const Vec cont = alpha * (game.kernel() * v);
        double change = 0.0;
        for (int x = 0; x < n; ++x) {
            if (!region[x]) continue;
            const double next = mode == StoppingMode::Max
                                    ? std::max(reward[x], cont[x])
                                    : std::min(reward[x], cont[x]);
            change = std::max(change, std::abs(next - v[x]));
            v[x] = next;
        }
        if (change < stop_change) break;
    }
    return v;
}

}  // namespace dynkin
