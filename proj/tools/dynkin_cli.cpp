// Command-line front end: solve a game file, verify a candidate profile
// pair, or estimate payoffs by simulation.
//
// Exit codes: 0 success / Verified, 1 input error, 2 solver
// non-convergence or verification failure.

#include "dynkin/game_io.hpp"
#include "dynkin/solve.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotVerified = 2;

struct CommonArgs {
    std::string game_path;
    std::string output = "text";
};

dynkin::ValidatedGame load(const std::string& path) {
    return dynkin::ValidatedGame::validate(dynkin::load_game(path));
}

void emit(const dynkin::RunReport& report, const dynkin::ValidatedGame& game,
          const CommonArgs& args, const std::string& report_path) {
    if (args.output == "json") {
        std::cout << dynkin::report_to_json(report, game) << "\n";
    } else {
        std::cout << dynkin::report_to_text(report, game);
    }
    if (!report_path.empty()) {
        dynkin::save_report(report_path, report, game);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium solver for discrete-time stopping games on finite Markov chains"};
    app.require_subcommand(1);

    CommonArgs args;
    dynkin::SolveOptions options;
    std::string mode = "auto";
    std::string profiles_path;
    std::string report_path;
    std::string initial_state;
    std::string horizon = "geometric";
    std::int64_t samples = 100000;
    int cutoff = 200;
    double precision = 1e-6;

    const std::map<std::string, dynkin::SolveMode> modes{
        {"auto", dynkin::SolveMode::Auto},
        {"zero-sum", dynkin::SolveMode::ZeroSum},
        {"symmetric", dynkin::SolveMode::Symmetric},
        {"general", dynkin::SolveMode::General},
        {"diagnose-pure", dynkin::SolveMode::DiagnosePure},
    };

    auto* solve = app.add_subcommand("solve", "solve for an equilibrium and verify it");
    solve->add_option("--game", args.game_path, "game file (JSON)")->required();
    solve->add_option("--mode", mode, "auto|zero-sum|symmetric|general|diagnose-pure")
        ->check(CLI::IsMember({"auto", "zero-sum", "symmetric", "general", "diagnose-pure"}));
    solve->add_option("--tol", options.tol, "solver tolerance (verification runs at 10x)");
    solve->add_option("--max-iter", options.max_iter, "iteration budget per attempt");
    solve->add_option("--damping", options.damping, "best-response damping factor");
    solve->add_option("--restarts", options.restarts, "random restarts for the general search");
    solve->add_option("--seed", options.seed, "seed for randomized restarts");
    solve->add_option("--output", args.output, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    solve->add_option("--report", report_path, "also write the JSON report to this path");

    auto* verify = app.add_subcommand("verify", "verify a candidate profile pair");
    verify->add_option("--game", args.game_path, "game file (JSON)")->required();
    verify->add_option("--profiles", profiles_path, "profiles file (JSON)")->required();
    verify->add_option("--tol", options.tol, "solver tolerance (verification runs at 10x)");
    verify->add_option("--output", args.output, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo payoff estimate");
    simulate->add_option("--game", args.game_path, "game file (JSON)")->required();
    simulate->add_option("--profiles", profiles_path, "profiles file (JSON)")->required();
    simulate->add_option("--samples", samples, "number of episodes");
    simulate->add_option("--seed", options.seed, "root seed of the episode streams");
    simulate->add_option("--initial-state", initial_state,
                         "initial state label (default: first declared state)");
    simulate->add_option("--horizon", horizon, "geometric|cutoff")
        ->check(CLI::IsMember({"geometric", "cutoff"}));
    simulate->add_option("--cutoff-steps", cutoff, "horizon length in cutoff mode");
    simulate->add_option("--precision", precision,
                         "bound the cutoff tail alpha^N*max|payoff| must stay under");
    simulate->add_option("--output", args.output, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        const dynkin::ValidatedGame game = load(args.game_path);

        if (solve->parsed()) {
            options.mode = modes.at(mode);
            const dynkin::RunReport report = dynkin::solve_game(game, options);
            emit(report, game, args, report_path);
            return report.converged ? kExitOk : kExitNotVerified;
        }

        if (verify->parsed()) {
            const auto [p1, p2] = dynkin::load_profiles(profiles_path, game);
            const dynkin::EquilibriumReport report =
                dynkin::verify_equilibrium(game, p1, p2, options.verify_tol());
            if (args.output == "json") {
                std::cout << dynkin::equilibrium_to_json(report, game) << "\n";
            } else {
                std::cout << "verdict: " << dynkin::verdict_name(report.verdict)
                          << " (max residual " << report.max_residual << ")\n";
                if (report.verdict == dynkin::Verdict::Failed) {
                    std::cout << "worst: state '" << game.label(report.worst_state)
                              << "', condition "
                              << dynkin::condition_name(report.worst_condition) << "\n";
                }
            }
            return report.verdict == dynkin::Verdict::Verified ? kExitOk
                                                               : kExitNotVerified;
        }

        // simulate
        const auto [p1, p2] = dynkin::load_profiles(profiles_path, game);
        dynkin::SimulationConfig config;
        config.samples = samples;
        config.seed = options.seed;
        config.mode = horizon == "cutoff" ? dynkin::HorizonMode::DiscountedCutoff
                                          : dynkin::HorizonMode::GeometricKilling;
        config.cutoff = cutoff;
        config.precision = precision;
        if (!initial_state.empty()) {
            const auto idx = game.index(initial_state);
            if (!idx) {
                std::cerr << "error: unknown state label '" << initial_state << "'\n";
                return kExitInput;
            }
            config.initial_state = *idx;
        }
        const dynkin::EmpiricalEstimate estimate =
            dynkin::estimate_payoffs(game, p1, p2, config);
        if (args.output == "json") {
            std::cout << dynkin::estimate_to_json(estimate) << "\n";
        } else {
            std::printf("mean1 = %.17g (se %.17g)\n", estimate.mean1, estimate.std_err1);
            std::printf("mean2 = %.17g (se %.17g)\n", estimate.mean2, estimate.std_err2);
            std::printf("episodes: %lld, p1-first %lld, p2-first %lld, simultaneous %lld, never %lld\n",
                        static_cast<long long>(estimate.samples),
                        static_cast<long long>(estimate.outcome_counts[0]),
                        static_cast<long long>(estimate.outcome_counts[1]),
                        static_cast<long long>(estimate.outcome_counts[2]),
                        static_cast<long long>(estimate.outcome_counts[3]));
        }
        return kExitOk;
    } catch (const dynkin::ParseError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const dynkin::SchemaError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const dynkin::ExplicitLimitError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const dynkin::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const dynkin::PreconditionViolated& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    }
}
