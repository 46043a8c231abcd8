#pragma once

#include "dynkin/game.hpp"
#include "dynkin/stopping.hpp"

#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace dynkin::testing {

inline Vec vec(std::initializer_list<double> values) {
    Vec out(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) out[i++] = v;
    return out;
}

inline Mat mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Mat out(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) out(i, j++) = v;
        ++i;
    }
    return out;
}

inline std::vector<std::string> default_labels(int n) {
    std::vector<std::string> labels;
    for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

inline ValidatedGame zero_sum_game(double alpha, Mat kernel, Vec f, Vec g, Vec h) {
    DynkinGame game;
    game.space.labels = default_labels(static_cast<int>(f.size()));
    game.alpha = alpha;
    game.kernel = std::move(kernel);
    game.player1 = {f, g, h};
    game.player2 = {-g, -f, -h};
    return ValidatedGame::validate(std::move(game));
}

inline ValidatedGame symmetric_game(double alpha, Mat kernel, Vec f, Vec g, Vec h) {
    DynkinGame game;
    game.space.labels = default_labels(static_cast<int>(f.size()));
    game.alpha = alpha;
    game.kernel = std::move(kernel);
    game.player1 = {f, g, h};
    game.player2 = game.player1;
    return ValidatedGame::validate(std::move(game));
}

inline ValidatedGame general_game(double alpha, Mat kernel, PayoffTriple p1,
                                  PayoffTriple p2) {
    DynkinGame game;
    game.space.labels = default_labels(static_cast<int>(p1.f.size()));
    game.alpha = alpha;
    game.kernel = std::move(kernel);
    game.player1 = std::move(p1);
    game.player2 = std::move(p2);
    return ValidatedGame::validate(std::move(game));
}

// The two-state game with a unique mixed equilibrium: alpha = 4/5,
// f = (0, 5), g = (0, 3), h = (2, 4), rows (1/2, 1/2) and (0, 1).
inline ValidatedGame two_state_example() {
    return zero_sum_game(0.8, mat({{0.5, 0.5}, {0.0, 1.0}}), vec({0.0, 5.0}),
                         vec({0.0, 3.0}), vec({2.0, 4.0}));
}

// Random instances ------------------------------------------------------

inline Mat random_kernel(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    Mat kernel(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            kernel(i, j) = unit(rng);
            sum += kernel(i, j);
        }
        kernel.row(i) /= sum;
    }
    return kernel;
}

inline Vec random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = dist(rng);
    return out;
}

inline ValidatedGame random_zero_sum(std::mt19937_64& rng, int n, double alpha) {
    return zero_sum_game(alpha, random_kernel(rng, n), random_vec(rng, n, -10, 10),
                         random_vec(rng, n, -10, 10), random_vec(rng, n, -10, 10));
}

inline ValidatedGame random_med_zero_sum(std::mt19937_64& rng, int n, double alpha) {
    const Vec f = random_vec(rng, n, -10, 10);
    const Vec g = random_vec(rng, n, -10, 10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec h(n);
    for (int i = 0; i < n; ++i) {
        const double lo = std::min(f[i], g[i]);
        const double hi = std::max(f[i], g[i]);
        h[i] = lo + unit(rng) * (hi - lo);
    }
    return zero_sum_game(alpha, random_kernel(rng, n), f, g, h);
}

inline ValidatedGame random_symmetric_fh(std::mt19937_64& rng, int n, double alpha) {
    const Vec f = random_vec(rng, n, -10, 10);
    return symmetric_game(alpha, random_kernel(rng, n), f,
                          random_vec(rng, n, -10, 10), f);
}

inline ValidatedGame random_general(std::mt19937_64& rng, int n, double alpha) {
    PayoffTriple p1{random_vec(rng, n, -10, 10), random_vec(rng, n, -10, 10),
                    random_vec(rng, n, -10, 10)};
    PayoffTriple p2{random_vec(rng, n, -10, 10), random_vec(rng, n, -10, 10),
                    random_vec(rng, n, -10, 10)};
    return general_game(alpha, random_kernel(rng, n), std::move(p1), std::move(p2));
}

inline StoppingProfile random_profile(std::mt19937_64& rng, const ValidatedGame& game) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec p(game.size());
    for (int i = 0; i < game.size(); ++i) p[i] = unit(rng);
    return game.make_profile(std::move(p));
}

// Independent oracles ----------------------------------------------------

/// Expected payoffs by explicit forward summation over the first horizon
/// epochs: sub-probability state masses are propagated through the
/// kernel and every stop event is paid out with its discount weight.
/// Truncation error is below max|payoff| * alpha^(horizon+1) / (1-alpha).
inline std::pair<Vec, Vec> finite_horizon_payoffs(const ValidatedGame& game,
                                                  const StoppingProfile& p1,
                                                  const StoppingProfile& p2,
                                                  int horizon) {
    const int n = game.size();
    Vec j1 = Vec::Zero(n), j2 = Vec::Zero(n);
    for (int x0 = 0; x0 < n; ++x0) {
        Vec mass = Vec::Zero(n);
        mass[x0] = 1.0;
        double disc = 1.0;
        for (int step = 0; step <= horizon; ++step) {
            Vec carry = Vec::Zero(n);
            for (int x = 0; x < n; ++x) {
                const double m = mass[x];
                if (m == 0.0) continue;
                const double both = p1.p[x] * p2.p[x];
                const double only1 = p1.p[x] * (1.0 - p2.p[x]);
                const double only2 = (1.0 - p1.p[x]) * p2.p[x];
                const double none = (1.0 - p1.p[x]) * (1.0 - p2.p[x]);
                j1[x0] += disc * m *
                          (both * game.h(1)[x] + only1 * game.f(1)[x] +
                           only2 * game.g(1)[x]);
                j2[x0] += disc * m *
                          (both * game.h(2)[x] + only1 * game.g(2)[x] +
                           only2 * game.f(2)[x]);
                if (none > 0.0) carry += m * none * game.kernel().row(x).transpose();
            }
            mass = std::move(carry);
            disc *= game.alpha();
        }
    }
    return {j1, j2};
}

/// Finite-horizon optimal reply value against a fixed opponent: exactly
/// `steps` applications of the one-step recursion starting from the
/// stop-immediately values.
inline Vec backward_induction_value(const ValidatedGame& game, int player,
                                    const Vec& opponent_p, int steps) {
    const int n = game.size();
    const auto& mine = game.payoffs(player);
    Vec reward(n);
    for (int x = 0; x < n; ++x) {
        reward[x] = (1.0 - opponent_p[x]) * mine.f[x] + opponent_p[x] * mine.h[x];
    }
    Vec v = reward;
    for (int step = 0; step < steps; ++step) {
        Vec next(n);
        for (int x = 0; x < n; ++x) {
            double continuation = opponent_p[x] * mine.g[x];
            double flow = 0.0;
            for (int y = 0; y < n; ++y) flow += game.kernel()(x, y) * v[y];
            continuation += (1.0 - opponent_p[x]) * game.alpha() * flow;
            next[x] = std::max(reward[x], continuation);
        }
        v = std::move(next);
    }
    return v;
}

inline std::vector<Vec> all_pure_vectors(int n) {
    std::vector<Vec> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec p(n);
        for (int i = 0; i < n; ++i) p[i] = (mask >> i) & 1 ? 1.0 : 0.0;
        out.push_back(std::move(p));
    }
    return out;
}

/// Equilibrium test through the best-response constraints: each profile
/// must be an admissible selection against the other.
inline bool equilibrium_by_constraints(const ValidatedGame& game,
                                       const StoppingProfile& p1,
                                       const StoppingProfile& p2,
                                       double tol = 1e-9) {
    const auto aux1 = build_auxiliary(game, 1, p2);
    const auto val1 = solve_wald_bellman(aux1, tol);
    const auto check1 = is_best_response(p1, classify_best_response(aux1, val1, 10 * tol));
    if (!check1.ok) return false;
    const auto aux2 = build_auxiliary(game, 2, p1);
    const auto val2 = solve_wald_bellman(aux2, tol);
    const auto check2 = is_best_response(p2, classify_best_response(aux2, val2, 10 * tol));
    return check2.ok;
}

}  // namespace dynkin::testing
