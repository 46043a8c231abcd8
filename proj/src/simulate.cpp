#include "dynkin/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dynkin {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGoldenGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

EpisodeRng::EpisodeRng(std::uint64_t root_seed, std::uint64_t episode)
    : state_(root_seed + (episode + 1) * kGoldenGamma) {
    // Warm the state so nearby episode indices decorrelate.
    splitmix64(state_);
}

double EpisodeRng::uniform() {
    // (0, 1]: a stop fires iff p >= u, so p = 0 never stops and p = 1
    // always does, exactly.
    return static_cast<double>((splitmix64(state_) >> 11) + 1) * 0x1.0p-53;
}

EpisodeOutcome sample_outcome(const ValidatedGame& game, const StoppingProfile& p1,
                              const StoppingProfile& p2, int x0, EpisodeRng& rng,
                              HorizonMode mode, int cutoff) {
    const double alpha = game.alpha();
    const Mat& kernel = game.kernel();
    int x = x0;
    double weight = 1.0;  // alpha^n in cutoff mode, 1 under killing

    for (int n = 0;; ++n) {
        const bool stop1 = p1.p[x] >= rng.uniform();
        const bool stop2 = p2.p[x] >= rng.uniform();
        if (stop1 && stop2) {
            return {weight * game.h(1)[x], weight * game.h(2)[x],
                    OutcomeTag::Simultaneous};
        }
        if (stop1) {
            return {weight * game.f(1)[x], weight * game.g(2)[x],
                    OutcomeTag::Player1First};
        }
        if (stop2) {
            return {weight * game.g(1)[x], weight * game.f(2)[x],
                    OutcomeTag::Player2First};
        }

        if (mode == HorizonMode::GeometricKilling) {
            if (rng.uniform() >= alpha) {
                return {0.0, 0.0, OutcomeTag::Never};
            }
        } else {
            if (n + 1 >= cutoff) {
                return {0.0, 0.0, OutcomeTag::Never};
            }
            weight *= alpha;
        }

        const double u = rng.uniform();
        double acc = 0.0;
        int next = game.size() - 1;
        for (int y = 0; y < game.size(); ++y) {
            acc += kernel(x, y);
            if (u < acc) {
                next = y;
                break;
            }
        }
        x = next;
    }
}

EmpiricalEstimate estimate_payoffs(const ValidatedGame& game,
                                   const StoppingProfile& p1,
                                   const StoppingProfile& p2,
                                   const SimulationConfig& config) {
    if (config.samples < 1) {
        throw std::invalid_argument("samples must be >= 1");
    }
    if (config.initial_state < 0 || config.initial_state >= game.size()) {
        throw std::invalid_argument("initial state out of range");
    }
    if (config.mode == HorizonMode::DiscountedCutoff) {
        const double tail =
            std::pow(game.alpha(), config.cutoff) * game.max_abs_payoff();
        if (tail > config.precision) {
            std::ostringstream msg;
            msg << "cutoff tail bound " << tail << " exceeds requested precision "
                << config.precision;
            throw std::invalid_argument(msg.str());
        }
    }

    double sum1 = 0.0, sum2 = 0.0, sumsq1 = 0.0, sumsq2 = 0.0;
    EmpiricalEstimate out;
    out.samples = config.samples;
    for (std::int64_t episode = 0; episode < config.samples; ++episode) {
        EpisodeRng rng(config.seed, static_cast<std::uint64_t>(episode));
        const EpisodeOutcome o = sample_outcome(game, p1, p2, config.initial_state,
                                                rng, config.mode, config.cutoff);
        sum1 += o.reward1;
        sum2 += o.reward2;
        sumsq1 += o.reward1 * o.reward1;
        sumsq2 += o.reward2 * o.reward2;
        ++out.outcome_counts[static_cast<int>(o.tag)];
    }

    const double n = static_cast<double>(config.samples);
    out.mean1 = sum1 / n;
    out.mean2 = sum2 / n;
    if (config.samples > 1) {
        const double var1 = std::max(0.0, (sumsq1 - n * out.mean1 * out.mean1) / (n - 1.0));
        const double var2 = std::max(0.0, (sumsq2 - n * out.mean2 * out.mean2) / (n - 1.0));
        out.std_err1 = std::sqrt(var1 / n);
        out.std_err2 = std::sqrt(var2 / n);
    }
    return out;
}

}  // namespace dynkin
