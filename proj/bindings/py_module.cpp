#include "dynkin/game_io.hpp"
#include "dynkin/solve.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace dynkin;

namespace {

ValidatedGame game_from_json(const std::string& text) {
    return ValidatedGame::validate(parse_game(nlohmann::json::parse(text)));
}

ValidatedGame game_from_file(const std::string& path) {
    return ValidatedGame::validate(load_game(path));
}

SolveMode mode_from_name(const std::string& name) {
    if (name == "auto") return SolveMode::Auto;
    if (name == "zero-sum") return SolveMode::ZeroSum;
    if (name == "symmetric") return SolveMode::Symmetric;
    if (name == "general") return SolveMode::General;
    if (name == "diagnose-pure") return SolveMode::DiagnosePure;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

std::vector<std::string> tag_names(const BestResponseConstraint& cons) {
    std::vector<std::string> out;
    out.reserve(cons.tags.size());
    for (ResponseTag tag : cons.tags) {
        switch (tag) {
            case ResponseTag::MustStop: out.push_back("stop"); break;
            case ResponseTag::MustContinue: out.push_back("continue"); break;
            case ResponseTag::Indifferent: out.push_back("indifferent"); break;
        }
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Solver for two-player stopping games on finite Markov chains";

    py::register_exception<ValidationError>(m, "GameValidationError");
    py::register_exception<ParseError>(m, "GameParseError");
    py::register_exception<SchemaError>(m, "GameSchemaError");
    py::register_exception<MedConditionViolated>(m, "MedConditionError");
    py::register_exception<PreconditionViolated>(m, "PreconditionError");

    py::class_<GameClass>(m, "GameClass")
        .def_readonly("is_zero_sum", &GameClass::is_zero_sum)
        .def_readonly("is_symmetric", &GameClass::is_symmetric)
        .def_readonly("med_condition", &GameClass::med_condition)
        .def_readonly("f_equals_h", &GameClass::f_equals_h)
        .def("__repr__", [](const GameClass& c) {
            return "GameClass(is_zero_sum=" + std::to_string(c.is_zero_sum) +
                   ", is_symmetric=" + std::to_string(c.is_symmetric) +
                   ", med_condition=" + std::to_string(c.med_condition) +
                   ", f_equals_h=" + std::to_string(c.f_equals_h) + ")";
        });

    py::class_<ValidatedGame>(m, "Game")
        .def_static("from_json", &game_from_json, py::arg("text"))
        .def_static("from_file", &game_from_file, py::arg("path"))
        .def_property_readonly("states", &ValidatedGame::labels)
        .def_property_readonly("alpha", &ValidatedGame::alpha)
        .def_property_readonly("kernel",
                               [](const ValidatedGame& g) { return g.kernel(); })
        .def("f", [](const ValidatedGame& g, int player) { return g.f(player); })
        .def("g", [](const ValidatedGame& g, int player) { return g.g(player); })
        .def("h", [](const ValidatedGame& g, int player) { return g.h(player); })
        .def("classify", &classify_game)
        .def("__len__", &ValidatedGame::size);

    py::class_<EquilibriumReport>(m, "EquilibriumReport")
        .def_property_readonly("p1", [](const EquilibriumReport& r) { return r.p1.p; })
        .def_property_readonly("p2", [](const EquilibriumReport& r) { return r.p2.p; })
        .def_readonly("v1", &EquilibriumReport::v1)
        .def_readonly("v2", &EquilibriumReport::v2)
        .def_readonly("residuals", &EquilibriumReport::residuals)
        .def_readonly("max_residual", &EquilibriumReport::max_residual)
        .def_readonly("iterations", &EquilibriumReport::iterations)
        .def_property_readonly("verified", [](const EquilibriumReport& r) {
            return r.verdict == Verdict::Verified;
        })
        .def_readonly("worst_state", &EquilibriumReport::worst_state)
        .def_readonly("worst_condition", &EquilibriumReport::worst_condition);

    py::class_<PureDiagnostics>(m, "PureDiagnostics")
        .def_readonly("m1", &PureDiagnostics::m1)
        .def_readonly("m2", &PureDiagnostics::m2)
        .def_readonly("v_m1", &PureDiagnostics::v_m1)
        .def_readonly("v_m2", &PureDiagnostics::v_m2)
        .def_readonly("witnesses_m1", &PureDiagnostics::witnesses_m1)
        .def_readonly("witnesses_m2", &PureDiagnostics::witnesses_m2)
        .def_readonly("pure_impossible", &PureDiagnostics::pure_impossible)
        .def_readonly("criterion_per_state", &PureDiagnostics::criterion_per_state)
        .def_readonly("pure_equilibrium_exists", &PureDiagnostics::criterion_exists);

    py::class_<EmpiricalEstimate>(m, "EmpiricalEstimate")
        .def_readonly("mean1", &EmpiricalEstimate::mean1)
        .def_readonly("mean2", &EmpiricalEstimate::mean2)
        .def_readonly("std_err1", &EmpiricalEstimate::std_err1)
        .def_readonly("std_err2", &EmpiricalEstimate::std_err2)
        .def_readonly("samples", &EmpiricalEstimate::samples)
        .def_readonly("outcome_counts", &EmpiricalEstimate::outcome_counts);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("solver_path", &RunReport::solver_path)
        .def_readonly("converged", &RunReport::converged)
        .def_readonly("classification", &RunReport::classification)
        .def_readonly("equilibrium", &RunReport::equilibrium)
        .def_readonly("diagnostics", &RunReport::diagnostics)
        .def_readonly("solve_seconds", &RunReport::solve_seconds);

    m.def("med", &med, py::arg("a"), py::arg("b"), py::arg("c"),
          "middle value of three reals");

    m.def(
        "solve",
        [](const ValidatedGame& game, const std::string& mode, double tol,
           int max_iter, double damping, int restarts, std::uint64_t seed) {
            SolveOptions options;
            options.mode = mode_from_name(mode);
            options.tol = tol;
            options.max_iter = max_iter;
            options.damping = damping;
            options.restarts = restarts;
            options.seed = seed;
            return solve_game(game, options);
        },
        py::arg("game"), py::arg("mode") = "auto", py::arg("tol") = 1e-9,
        py::arg("max_iter") = 10000, py::arg("damping") = 0.5,
        py::arg("restarts") = 16, py::arg("seed") = 0,
        "classify, dispatch to the matching solver, and verify the result");

    m.def(
        "verify",
        [](const ValidatedGame& game, const Vec& p1, const Vec& p2, double tol) {
            return verify_equilibrium(game, game.make_profile(p1),
                                      game.make_profile(p2), tol);
        },
        py::arg("game"), py::arg("p1"), py::arg("p2"), py::arg("tol") = 1e-8,
        "check a candidate profile pair against the equilibrium system");

    m.def(
        "evaluate_payoffs",
        [](const ValidatedGame& game, const Vec& p1, const Vec& p2) {
            return evaluate_payoffs(game, game.make_profile(p1),
                                    game.make_profile(p2));
        },
        py::arg("game"), py::arg("p1"), py::arg("p2"),
        "exact expected payoffs of a profile pair for both players");

    m.def(
        "best_response",
        [](const ValidatedGame& game, int player, const Vec& opponent, double tol) {
            const auto aux = build_auxiliary(game, player, game.make_profile(opponent));
            const auto val = solve_wald_bellman(aux, tol);
            const auto cons = classify_best_response(aux, val, tol);
            return py::make_tuple(val.v_c, val.continuation, tag_names(cons));
        },
        py::arg("game"), py::arg("player"), py::arg("opponent"),
        py::arg("tol") = 1e-9,
        "value, continuation value and per-state stop/continue/indifferent tags "
        "of the optimal reply to a fixed opponent profile");

    m.def(
        "med_value_iteration",
        [](const ValidatedGame& game, double tol) {
            return med_value_iteration(game, tol);
        },
        py::arg("game"), py::arg("tol") = 1e-9);

    m.def(
        "shapley_value",
        [](const ValidatedGame& game, double tol, int max_iter) {
            const auto sol = shapley_solve(game, tol, max_iter);
            return py::make_tuple(sol.value, sol.p1.p, sol.p2.p,
                                  sol.status == ZeroSumSolution::Status::Ok);
        },
        py::arg("game"), py::arg("tol") = 1e-9, py::arg("max_iter") = 100000,
        "zero-sum value and profiles from local matrix-game iteration");

    m.def(
        "optimal_stopping_value",
        [](const ValidatedGame& game, double tol) {
            return optimal_stopping_value(game, tol);
        },
        py::arg("game"), py::arg("tol") = 1e-9);

    m.def(
        "war_of_attrition",
        [](const ValidatedGame& game) {
            const auto sol = war_of_attrition_profile(game);
            return py::make_tuple(sol.p.p, sol.value);
        },
        py::arg("game"),
        "fully mixed symmetric profile for strictly excessive f with g > f = h");

    m.def(
        "estimate_payoffs",
        [](const ValidatedGame& game, const Vec& p1, const Vec& p2,
           std::int64_t samples, std::uint64_t seed, const std::string& initial_state,
           const std::string& horizon, int cutoff, double precision) {
            SimulationConfig config;
            config.samples = samples;
            config.seed = seed;
            config.precision = precision;
            if (!initial_state.empty()) {
                const auto idx = game.index(initial_state);
                if (!idx) {
                    throw std::invalid_argument("unknown state label '" +
                                                initial_state + "'");
                }
                config.initial_state = *idx;
            }
            config.mode = horizon == "cutoff" ? HorizonMode::DiscountedCutoff
                                              : HorizonMode::GeometricKilling;
            config.cutoff = cutoff;
            return estimate_payoffs(game, game.make_profile(p1),
                                    game.make_profile(p2), config);
        },
        py::arg("game"), py::arg("p1"), py::arg("p2"),
        py::arg("samples") = 100000, py::arg("seed") = 0,
        py::arg("initial_state") = "", py::arg("horizon") = "geometric",
        py::arg("cutoff") = 200, py::arg("precision") = 1e-6,
        "Monte Carlo estimate of both players' expected payoffs");

    m.def(
        "report_json",
        [](const RunReport& report, const ValidatedGame& game) {
            return report_to_json(report, game);
        },
        py::arg("report"), py::arg("game"));
}
