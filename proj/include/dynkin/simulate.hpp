#pragma once

#include "dynkin/game.hpp"

#include <array>
#include <cstdint>

namespace dynkin {

enum class HorizonMode {
    GeometricKilling,   // kill each step with probability 1-alpha, no discount
    DiscountedCutoff,   // explicit alpha^n weights, truncated at cutoff steps
};

struct SimulationConfig {
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    int initial_state = 0;
    HorizonMode mode = HorizonMode::GeometricKilling;
    int cutoff = 200;          // DiscountedCutoff only
    double precision = 1e-6;   // required bound on the cutoff tail alpha^N*max|payoff|
};

enum class OutcomeTag : int {
    Player1First = 0,
    Player2First = 1,
    Simultaneous = 2,
    Never = 3,
};

struct EpisodeOutcome {
    double reward1 = 0.0;
    double reward2 = 0.0;
    OutcomeTag tag = OutcomeTag::Never;
};

struct EmpiricalEstimate {
    double mean1 = 0.0, mean2 = 0.0;
    double std_err1 = 0.0, std_err2 = 0.0;
    std::int64_t samples = 0;
    std::array<std::int64_t, 4> outcome_counts{};  // indexed by OutcomeTag
};

/// Deterministic per-episode random stream: episode k of root seed s uses
/// an mt19937_64 engine seeded with splitmix64(s + (k+1)*golden_gamma).
/// The mapping is part of the interface; results reproduce across runs.
class EpisodeRng {
public:
    EpisodeRng(std::uint64_t root_seed, std::uint64_t episode);

    /// Uniform draw on (0, 1] with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

/// Plays one episode from x0: each epoch both players compare their stop
/// probability against an independent uniform; simultaneous firing pays h,
/// a lone stop pays f to the stopper and g to the other. Under geometric
/// killing a third uniform ends the episode with probability 1-alpha and
/// rewards stay undiscounted, which is unbiased for the discounted payoff.
/// Never stopping contributes 0.
EpisodeOutcome sample_outcome(const ValidatedGame& game, const StoppingProfile& p1,
                              const StoppingProfile& p2, int x0, EpisodeRng& rng,
                              HorizonMode mode = HorizonMode::GeometricKilling,
                              int cutoff = 200);

/// Sample means and standard errors over config.samples independent
/// episodes; bit-identical for equal seeds.
EmpiricalEstimate estimate_payoffs(const ValidatedGame& game,
                                   const StoppingProfile& p1,
                                   const StoppingProfile& p2,
                                   const SimulationConfig& config);

}  // namespace dynkin
