#include "dynkin/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace dynkin {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_finite(const Vec& v, const std::string& what,
                  const std::vector<std::string>& labels,
                  std::vector<ValidationIssue>& out) {
    for (int i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            std::ostringstream msg;
            msg << what << " has non-finite entry at state '" << labels[i] << "'";
            out.push_back({ValidationIssue::Code::NonFiniteEntry, msg.str()});
        }
    }
}

void check_length(Eigen::Index got, Eigen::Index want, const std::string& what,
                  std::vector<ValidationIssue>& out) {
    if (got != want) {
        std::ostringstream msg;
        msg << what << " has " << got << " entries, expected " << want;
        out.push_back({ValidationIssue::Code::LengthMismatch, msg.str()});
    }
}

}  // namespace

std::string to_string(ValidationIssue::Code code) {
    switch (code) {
        case ValidationIssue::Code::RowSumError: return "RowSumError";
        case ValidationIssue::Code::AlphaRangeError: return "AlphaRangeError";
        case ValidationIssue::Code::LengthMismatch: return "LengthMismatch";
        case ValidationIssue::Code::NonFiniteEntry: return "NonFiniteEntry";
        case ValidationIssue::Code::StateSpaceError: return "StateSpaceError";
        case ValidationIssue::Code::ProfileRangeError: return "ProfileRangeError";
    }
    return "UnknownIssue";
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
    std::ostringstream msg;
    msg << "invalid game (" << issues.size() << " issue(s)):";
    for (const auto& issue : issues) {
        msg << "\n  [" << to_string(issue.code) << "] " << issue.message;
    }
    return msg.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> list)
    : Error(join_issues(list)), issues(std::move(list)) {}

MedConditionViolated::MedConditionViolated(std::string msg, std::vector<int> states)
    : Error(std::move(msg)), witnesses(std::move(states)) {}

PreconditionViolated::PreconditionViolated(std::string msg, std::vector<int> states)
    : Error(std::move(msg)), witnesses(std::move(states)) {}

bool StoppingProfile::pure() const {
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] != 0.0 && p[i] != 1.0) return false;
    }
    return true;
}

double med(double a, double b, double c) {
    return std::min({std::max(a, b), std::max(a, c), std::max(b, c)});
}

std::vector<ValidationIssue> check_game(const DynkinGame& game) {
    std::vector<ValidationIssue> issues;
    const auto& labels = game.space.labels;
    const Eigen::Index n = static_cast<Eigen::Index>(labels.size());

    if (n == 0) {
        issues.push_back({ValidationIssue::Code::StateSpaceError,
                          "state space is empty"});
        return issues;
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : labels) {
        if (label.empty()) {
            issues.push_back({ValidationIssue::Code::StateSpaceError,
                              "state label is empty"});
        }
        if (!seen.insert(label).second) {
            issues.push_back({ValidationIssue::Code::StateSpaceError,
                              "duplicate state label '" + label + "'"});
        }
    }

    if (!(game.alpha > 0.0 && game.alpha < 1.0)) {
        std::ostringstream msg;
        msg << "alpha = " << game.alpha << " is outside the open interval (0,1)";
        issues.push_back({ValidationIssue::Code::AlphaRangeError, msg.str()});
    }

    if (game.kernel.rows() != n || game.kernel.cols() != n) {
        std::ostringstream msg;
        msg << "kernel is " << game.kernel.rows() << "x" << game.kernel.cols()
            << ", expected " << n << "x" << n;
        issues.push_back({ValidationIssue::Code::LengthMismatch, msg.str()});
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            double sum = 0.0;
            bool entries_ok = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double q = game.kernel(i, j);
                if (!std::isfinite(q) || q < 0.0 || q > 1.0) {
                    std::ostringstream msg;
                    msg << "kernel row for state '" << labels[i]
                        << "' has entry " << q << " outside [0,1]";
                    issues.push_back({ValidationIssue::Code::RowSumError, msg.str()});
                    entries_ok = false;
                    break;
                }
                sum += q;
            }
            if (entries_ok && std::abs(sum - 1.0) > kRowSumTol) {
                std::ostringstream msg;
                msg << "kernel row for state '" << labels[i] << "' sums to " << sum;
                issues.push_back({ValidationIssue::Code::RowSumError, msg.str()});
            }
        }
    }

    const auto check_triple = [&](const PayoffTriple& t, const std::string& who) {
        check_length(t.f.size(), n, who + ".f", issues);
        check_length(t.g.size(), n, who + ".g", issues);
        check_length(t.h.size(), n, who + ".h", issues);
        if (t.f.size() == n) check_finite(t.f, who + ".f", labels, issues);
        if (t.g.size() == n) check_finite(t.g, who + ".g", labels, issues);
        if (t.h.size() == n) check_finite(t.h, who + ".h", labels, issues);
    };
    check_triple(game.player1, "player1");
    check_triple(game.player2, "player2");

    return issues;
}

ValidatedGame::ValidatedGame(DynkinGame game) : game_(std::move(game)) {
    for (int i = 0; i < static_cast<int>(game_.space.labels.size()); ++i) {
        index_.emplace(game_.space.labels[i], i);
    }
}

ValidatedGame ValidatedGame::validate(DynkinGame game) {
    if (game.space.labels.size() > static_cast<std::size_t>(kMaxStates)) {
        std::ostringstream msg;
        msg << "game declares " << game.space.labels.size()
            << " states, above the supported limit of " << kMaxStates;
        throw ExplicitLimitError(msg.str());
    }
    auto issues = check_game(game);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return ValidatedGame(std::move(game));
}

std::optional<int> ValidatedGame::index(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const PayoffTriple& ValidatedGame::payoffs(int player) const {
    if (player == 1) return game_.player1;
    if (player == 2) return game_.player2;
    throw std::invalid_argument("player must be 1 or 2");
}

double ValidatedGame::max_abs_payoff() const {
    double m = 0.0;
    for (const auto* t : {&game_.player1, &game_.player2}) {
        m = std::max({m, t->f.cwiseAbs().maxCoeff(), t->g.cwiseAbs().maxCoeff(),
                      t->h.cwiseAbs().maxCoeff()});
    }
    return m;
}

StoppingProfile ValidatedGame::make_profile(Vec p) const {
    std::vector<ValidationIssue> issues;
    check_length(p.size(), size(), "profile", issues);
    if (issues.empty()) {
        for (int i = 0; i < p.size(); ++i) {
            if (!std::isfinite(p[i]) || p[i] < 0.0 || p[i] > 1.0) {
                std::ostringstream msg;
                msg << "stopping probability " << p[i] << " at state '"
                    << label(i) << "' is outside [0,1]";
                issues.push_back({ValidationIssue::Code::ProfileRangeError, msg.str()});
            }
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return StoppingProfile{std::move(p)};
}

GameClass classify_game(const ValidatedGame& game) {
    const auto& p1 = game.payoffs(1);
    const auto& p2 = game.payoffs(2);
    const int n = game.size();

    GameClass cls;
    cls.is_zero_sum = (p1.f.array() == -p2.g.array()).all() &&
                      (p1.g.array() == -p2.f.array()).all() &&
                      (p1.h.array() == -p2.h.array()).all();
    cls.is_symmetric = (p1.f.array() == p2.f.array()).all() &&
                       (p1.g.array() == p2.g.array()).all() &&
                       (p1.h.array() == p2.h.array()).all();

    if (cls.is_zero_sum) {
        cls.med_condition = true;
        for (int x = 0; x < n; ++x) {
            if (med(p1.f[x], p1.h[x], p1.g[x]) != p1.h[x]) {
                cls.med_condition = false;
                break;
            }
        }
    }
    if (cls.is_symmetric) {
        cls.f_equals_h = (p1.f.array() == p1.h.array()).all();
    }
    return cls;
}

}  // namespace dynkin
