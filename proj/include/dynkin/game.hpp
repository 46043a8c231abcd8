#pragma once

#include "dynkin/types.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dynkin {

// Hard cap on the state count; everything downstream is dense.
inline constexpr int kMaxStates = 10000;

struct StateSpace {
    std::vector<std::string> labels;
};

/// Per-state rewards for one player: f if this player stops strictly
/// first, g if the opponent stops strictly first, h on a simultaneous stop.
struct PayoffTriple {
    Vec f;
    Vec g;
    Vec h;
};

/// Raw, unvalidated game description. Use ValidatedGame::validate to
/// obtain a checked, immutable instance.
struct DynkinGame {
    StateSpace space;
    Mat kernel;       // row-stochastic transition matrix
    double alpha = 0.0;
    PayoffTriple player1;
    PayoffTriple player2;
};

/// Markovian randomized stopping strategy: stop at state x with
/// probability p(x), independently at every visit.
struct StoppingProfile {
    Vec p;

    bool pure() const;
};

struct GameClass {
    bool is_zero_sum = false;
    bool is_symmetric = false;
    bool med_condition = false;  // zero-sum only
    bool f_equals_h = false;     // symmetric only
};

/// min of the pairwise maxima; equals the middle value of {a, b, c}.
double med(double a, double b, double c);

std::vector<ValidationIssue> check_game(const DynkinGame& game);

class ValidatedGame {
public:
    /// Throws ExplicitLimitError above kMaxStates, otherwise
    /// ValidationError carrying every violation found.
    static ValidatedGame validate(DynkinGame game);

    int size() const { return static_cast<int>(game_.space.labels.size()); }
    const std::vector<std::string>& labels() const { return game_.space.labels; }
    const std::string& label(int state) const { return game_.space.labels.at(state); }
    std::optional<int> index(const std::string& label) const;

    const Mat& kernel() const { return game_.kernel; }
    double alpha() const { return game_.alpha; }

    /// player is 1 or 2.
    const PayoffTriple& payoffs(int player) const;
    const Vec& f(int player) const { return payoffs(player).f; }
    const Vec& g(int player) const { return payoffs(player).g; }
    const Vec& h(int player) const { return payoffs(player).h; }

    const DynkinGame& raw() const { return game_; }

    double max_abs_payoff() const;

    /// Throws ValidationError unless every entry of p lies in [0, 1] and
    /// the length matches the state count.
    StoppingProfile make_profile(Vec p) const;

private:
    explicit ValidatedGame(DynkinGame game);

    DynkinGame game_;
    std::unordered_map<std::string, int> index_;
};

/// Flags use exact floating-point equality: games are authored, not
/// computed, so near-misses are reported as not zero-sum / not symmetric.
GameClass classify_game(const ValidatedGame& game);

}  // namespace dynkin
