#include "fmdiag/analysis.hpp"

#include <sstream>

#include "fmdiag/sat.hpp"

namespace fmdiag {

AnalysisReport analyze(const ConstraintSet& cs, const FeatureModel& model) {
    AnalysisReport report;
    Solver solver;
    const ClauseDB db = cs.to_clause_db();
    const auto& vars = cs.variables();

    report.void_model = !solver.solve(db).sat();
    if (report.void_model) {
        report.solver_calls = solver.count_calls();
        return report;
    }

    std::vector<bool> dead(model.features().size(), false);
    for (std::size_t i = 0; i < model.features().size(); ++i) {
        const Clause unit{Lit(vars.at(model.features()[i]), true)};
        if (!solver.solve(db, std::span<const Clause>(&unit, 1)).sat()) {
            dead[i] = true;
            report.dead_features.push_back(model.features()[i]);
        }
    }

    for (std::size_t i = 0; i < model.features().size(); ++i) {
        const auto& f = model.features()[i];
        const Relationship* rel = model.parent_relationship(f);
        if (rel == nullptr || rel->kind == RelationKind::Mandatory) continue;
        const std::vector<Clause> probe{{Lit(vars.at(rel->parent), true)}, {Lit(vars.at(f), false)}};
        const bool forced = !solver.solve(db, probe).sat();
        if (forced && !dead[i]) report.false_optionals.push_back(f);
    }
    report.solver_calls = solver.count_calls();
    return report;
}

std::vector<TestCase> generate_tests(const FeatureModel& model, const std::vector<TestKind>& kinds) {
    std::vector<TestCase> out;
    for (TestKind kind : kinds) {
        if (kind != TestKind::DeadFeature) continue;
        for (const auto& f : model.features()) {
            if (f == model.root()) continue;
            out.push_back({"gen_dead_" + f, Formula::atom(f, true), Polarity::Positive});
        }
    }
    return out;
}

std::string format_analysis(const AnalysisReport& report) {
    auto list = [](const std::vector<std::string>& xs) {
        std::string s;
        for (const auto& x : xs) s += ' ' + x;
        return s;
    };
    std::ostringstream out;
    out << "void: " << (report.void_model ? "yes" : "no") << '\n';
    out << "dead:" << list(report.dead_features) << '\n';
    out << "false-optional:" << list(report.false_optionals) << '\n';
    return out.str();
}

}  // namespace fmdiag
