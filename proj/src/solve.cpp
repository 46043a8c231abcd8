#include "dynkin/solve.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dynkin {

namespace {

EquilibriumReport from_zero_sum(const ZeroSumSolution& sol) {
    EquilibriumReport rep = sol.verification;
    rep.iterations = sol.iterations;
    return rep;
}

RunReport dispatch(const ValidatedGame& game, const SolveOptions& options) {
    RunReport report;
    report.states = game.labels();
    report.alpha = game.alpha();
    report.classification = classify_game(game);
    const GameClass& cls = report.classification;

    const SolveMode mode = options.mode;
    const bool want_zero_sum = mode == SolveMode::ZeroSum ||
                               (mode == SolveMode::Auto && cls.is_zero_sum) ||
                               mode == SolveMode::DiagnosePure;
    const bool want_symmetric =
        mode == SolveMode::Symmetric ||
        (mode == SolveMode::Auto && !cls.is_zero_sum && cls.is_symmetric);

    if (want_zero_sum) {
        if (!cls.is_zero_sum) {
            throw PreconditionViolated("requested zero-sum solver on a game that is not zero-sum", {});
        }
        ZeroSumSolution sol =
            solve_zero_sum(game, options.tol, options.max_iter, options.verify_tol());
        report.solver_path = sol.method == ZeroSumMethod::MedIteration
                                 ? "zero-sum-med"
                                 : "zero-sum-shapley";
        report.converged = sol.status == ZeroSumSolution::Status::Ok;
        report.equilibrium = from_zero_sum(sol);

        if (mode == SolveMode::DiagnosePure) {
            report.solver_path = "diagnose-pure";
            PureDiagnostics diag = pure_nonexistence_diagnostic(game);
            const PureExistenceResult iff =
                pure_existence_check(game, sol.value, options.tol);
            diag.criterion_per_state = iff.per_state;
            diag.criterion_exists = iff.exists;
            report.diagnostics = std::move(diag);
        }
        return report;
    }

    if (want_symmetric) {
        if (!cls.is_symmetric) {
            throw PreconditionViolated("requested symmetric solver on a game that is not symmetric", {});
        }
        SymmetricSearchOptions sym;
        sym.tol = options.verify_tol();
        sym.solver_tol = options.tol;
        sym.max_iter = options.max_iter;
        sym.damping = options.damping;
        SymmetricSolution sol = solve_symmetric(game, sym);
        report.solver_path = sol.method == SymmetricMethod::ClosedForm
                                 ? "symmetric-closed-form"
                                 : "symmetric-fixed-point";
        report.converged = sol.converged;
        report.equilibrium = sol.verification;
        report.equilibrium.iterations = sol.iterations;
        return report;
    }

    SearchOptions search;
    search.tol = options.verify_tol();
    search.solver_tol = options.tol;
    search.max_iter = options.max_iter;
    search.damping = options.damping;
    search.restarts = options.restarts;
    search.seed = options.seed;
    const StoppingProfile zeros = game.make_profile(Vec::Zero(game.size()));
    SearchResult result = best_response_search(game, zeros, zeros, search);
    report.solver_path = "general-search";
    report.converged = result.converged;
    report.equilibrium = result.report;
    report.equilibrium.iterations = result.iterations;
    return report;
}

}  // namespace

RunReport solve_game(const ValidatedGame& game, const SolveOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report = dispatch(game, options);
    report.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

std::string verdict_name(Verdict verdict) {
    return verdict == Verdict::Verified ? "Verified" : "Failed";
}

std::string condition_name(int condition) {
    switch (condition) {
        case 0: return "value-equation-p1";
        case 1: return "value-equation-p2";
        case 2: return "stop-dominance-p1";
        case 3: return "continue-dominance-p1";
        case 4: return "stop-dominance-p2";
        case 5: return "continue-dominance-p2";
    }
    return "unknown";
}

// ---------------------------------------------------------------------
// Report JSON writer. Hand-rolled so every float carries 17 significant
// digits.

namespace {

class JsonOut {
public:
    void begin_object() { sep(); out_ << '{'; fresh_ = true; }
    void end_object() { out_ << '}'; fresh_ = false; }
    void begin_array() { sep(); out_ << '['; fresh_ = true; }
    void end_array() { out_ << ']'; fresh_ = false; }

    void key(const std::string& name) {
        sep();
        write_string(name);
        out_ << ':';
        fresh_ = true;
    }

    void value(double x) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out_ << buf;
    }
    void value(std::int64_t x) { sep(); out_ << x; }
    void value(int x) { sep(); out_ << x; }
    void value(bool x) { sep(); out_ << (x ? "true" : "false"); }
    void value(const std::string& x) { sep(); write_string(x); }

    void vector(const Vec& v) {
        begin_array();
        for (Eigen::Index i = 0; i < v.size(); ++i) value(v[i]);
        end_array();
    }

    std::string str() const { return out_.str(); }

private:
    void sep() {
        if (!fresh_) out_ << ',';
        fresh_ = false;
    }
    void write_string(const std::string& s) {
        out_ << '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ << "\\\""; break;
                case '\\': out_ << "\\\\"; break;
                case '\n': out_ << "\\n"; break;
                case '\t': out_ << "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out_ << buf;
                    } else {
                        out_ << c;
                    }
            }
        }
        out_ << '"';
    }

    std::ostringstream out_;
    bool fresh_ = true;
};

void write_equilibrium(JsonOut& json, const EquilibriumReport& rep,
                       const ValidatedGame& game) {
    json.begin_object();
    json.key("p1");
    json.vector(rep.p1.p);
    json.key("p2");
    json.vector(rep.p2.p);
    json.key("v1");
    json.vector(rep.v1);
    json.key("v2");
    json.vector(rep.v2);
    json.key("verdict");
    json.value(verdict_name(rep.verdict));
    json.key("max_residual");
    json.value(rep.max_residual);
    if (rep.verdict == Verdict::Failed && rep.worst_state >= 0) {
        json.key("worst_state");
        json.value(game.label(rep.worst_state));
        json.key("worst_condition");
        json.value(condition_name(rep.worst_condition));
    }
    json.key("iterations");
    json.value(rep.iterations);
    json.key("residuals");
    json.begin_array();
    for (int x = 0; x < rep.residuals.rows(); ++x) {
        json.vector(rep.residuals.row(x).transpose());
    }
    json.end_array();
    json.end_object();
}

void write_diagnostics(JsonOut& json, const PureDiagnostics& diag,
                       const ValidatedGame& game) {
    const auto state_list = [&](const std::vector<int>& states) {
        json.begin_array();
        for (int x : states) json.value(game.label(x));
        json.end_array();
    };
    json.begin_object();
    json.key("m1");
    state_list(diag.m1);
    json.key("m2");
    state_list(diag.m2);
    if (diag.v_m1.size() > 0) {
        json.key("v_m1");
        json.vector(diag.v_m1);
    }
    if (diag.v_m2.size() > 0) {
        json.key("v_m2");
        json.vector(diag.v_m2);
    }
    json.key("witnesses_m1");
    state_list(diag.witnesses_m1);
    json.key("witnesses_m2");
    state_list(diag.witnesses_m2);
    json.key("pure_impossible");
    json.value(diag.pure_impossible);
    if (diag.criterion_per_state) {
        json.key("criterion_per_state");
        json.begin_array();
        for (bool b : *diag.criterion_per_state) json.value(b);
        json.end_array();
    }
    if (diag.criterion_exists) {
        json.key("pure_equilibrium_exists");
        json.value(*diag.criterion_exists);
    }
    json.end_object();
}

void write_estimate(JsonOut& json, const EmpiricalEstimate& est) {
    json.begin_object();
    json.key("mean1");
    json.value(est.mean1);
    json.key("mean2");
    json.value(est.mean2);
    json.key("std_err1");
    json.value(est.std_err1);
    json.key("std_err2");
    json.value(est.std_err2);
    json.key("samples");
    json.value(est.samples);
    json.key("outcome_counts");
    json.begin_object();
    json.key("player1_first");
    json.value(est.outcome_counts[0]);
    json.key("player2_first");
    json.value(est.outcome_counts[1]);
    json.key("simultaneous");
    json.value(est.outcome_counts[2]);
    json.key("never");
    json.value(est.outcome_counts[3]);
    json.end_object();
    json.end_object();
}

}  // namespace

std::string equilibrium_to_json(const EquilibriumReport& report,
                                const ValidatedGame& game) {
    JsonOut json;
    write_equilibrium(json, report, game);
    return json.str();
}

std::string estimate_to_json(const EmpiricalEstimate& estimate) {
    JsonOut json;
    write_estimate(json, estimate);
    return json.str();
}

std::string report_to_json(const RunReport& report, const ValidatedGame& game) {
    JsonOut json;
    json.begin_object();
    json.key("states");
    json.begin_array();
    for (const auto& s : report.states) json.value(s);
    json.end_array();
    json.key("alpha");
    json.value(report.alpha);
    json.key("classification");
    json.begin_object();
    json.key("is_zero_sum");
    json.value(report.classification.is_zero_sum);
    json.key("is_symmetric");
    json.value(report.classification.is_symmetric);
    json.key("med_condition");
    json.value(report.classification.med_condition);
    json.key("f_equals_h");
    json.value(report.classification.f_equals_h);
    json.end_object();
    json.key("solver_path");
    json.value(report.solver_path);
    json.key("converged");
    json.value(report.converged);
    json.key("equilibrium");
    write_equilibrium(json, report.equilibrium, game);
    if (report.diagnostics) {
        json.key("diagnostics");
        write_diagnostics(json, *report.diagnostics, game);
    }
    if (report.estimate) {
        json.key("estimate");
        write_estimate(json, *report.estimate);
    }
    json.key("solve_seconds");
    json.value(report.solve_seconds);
    json.end_object();
    return json.str();
}

std::string report_to_text(const RunReport& report, const ValidatedGame& game) {
    std::ostringstream out;
    out.precision(12);
    out << "game: " << game.size() << " state(s), alpha = " << report.alpha << "\n";
    out << "class:";
    if (report.classification.is_zero_sum) {
        out << " zero-sum";
        out << (report.classification.med_condition ? " (med condition holds)"
                                                    : " (med condition fails)");
    }
    if (report.classification.is_symmetric) {
        out << " symmetric";
        if (report.classification.f_equals_h) out << " (f = h)";
    }
    if (!report.classification.is_zero_sum && !report.classification.is_symmetric) {
        out << " general";
    }
    out << "\n";
    out << "solver: " << report.solver_path << "\n";

    const EquilibriumReport& eq = report.equilibrium;
    out << "verdict: " << verdict_name(eq.verdict)
        << " (max residual " << eq.max_residual << ")\n";
    if (eq.verdict == Verdict::Failed && eq.worst_state >= 0) {
        out << "worst: state '" << game.label(eq.worst_state) << "', condition "
            << condition_name(eq.worst_condition) << "\n";
    }
    const auto row = [&](const char* name, const Vec& v) {
        out << name << ":";
        for (Eigen::Index i = 0; i < v.size(); ++i) out << " " << v[i];
        out << "\n";
    };
    if (eq.p1.p.size() > 0) {
        row("p1", eq.p1.p);
        row("p2", eq.p2.p);
        row("v1", eq.v1);
        row("v2", eq.v2);
    }

    if (report.diagnostics) {
        const PureDiagnostics& diag = *report.diagnostics;
        const auto list = [&](const std::vector<int>& states) {
            if (states.empty()) {
                out << "{}";
                return;
            }
            out << "{";
            for (std::size_t i = 0; i < states.size(); ++i) {
                out << (i ? ", " : "") << game.label(states[i]);
            }
            out << "}";
        };
        out << "M1 = ";
        list(diag.m1);
        out << ", M2 = ";
        list(diag.m2);
        out << "\n";
        for (int x : diag.m1) out << "V_M1(" << game.label(x) << ") = " << diag.v_m1[x] << "\n";
        for (int x : diag.m2) out << "V_M2(" << game.label(x) << ") = " << diag.v_m2[x] << "\n";
        if (diag.pure_impossible) {
            out << "pure impossible, witness state(s):";
            for (int x : diag.witnesses_m1) out << " " << game.label(x);
            for (int x : diag.witnesses_m2) out << " " << game.label(x);
            out << "\n";
        } else {
            out << "no witness against pure equilibria\n";
        }
        if (diag.criterion_exists) {
            out << "pure equilibrium exists (value criterion): "
                << (*diag.criterion_exists ? "yes" : "no") << "\n";
        }
    }
    if (report.estimate) {
        const EmpiricalEstimate& est = *report.estimate;
        out << "estimate: mean1 = " << est.mean1 << " (se " << est.std_err1
            << "), mean2 = " << est.mean2 << " (se " << est.std_err2 << "), samples "
            << est.samples << "\n";
        out << "outcomes: p1-first " << est.outcome_counts[0] << ", p2-first "
            << est.outcome_counts[1] << ", simultaneous " << est.outcome_counts[2]
            << ", never " << est.outcome_counts[3] << "\n";
    }
    out << "solve time: " << report.solve_seconds << " s\n";
    return out.str();
}

void save_report(const std::string& path, const RunReport& report,
                 const ValidatedGame& game) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write report file '" + path + "'");
    }
    out << report_to_json(report, game) << '\n';
}

}  // namespace dynkin
