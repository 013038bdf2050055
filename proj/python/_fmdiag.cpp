#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fmdiag/analysis.hpp"
#include "fmdiag/cli.hpp"
#include "fmdiag/debug.hpp"
#include "fmdiag/encode.hpp"
#include "fmdiag/error.hpp"
#include "fmdiag/feature_model.hpp"
#include "fmdiag/sat.hpp"
#include "fmdiag/synth.hpp"
#include "fmdiag/test_suite.hpp"

namespace py = pybind11;
using namespace fmdiag;

namespace {

std::vector<std::vector<std::int64_t>> to_dimacs(const std::vector<Clause>& clauses) {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& c : clauses) {
        std::vector<std::int64_t> row;
        for (Lit l : c) row.push_back(l.dimacs());
        out.push_back(std::move(row));
    }
    return out;
}

Clause from_dimacs(const std::vector<std::int64_t>& row) {
    Clause c;
    for (auto x : row) {
        if (x == 0) throw Error("DIMACS literal 0 is not allowed inside a clause");
        c.push_back(Lit(static_cast<Var>((x > 0 ? x : -x) - 1), x > 0));
    }
    return c;
}

std::string polarity_name(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

}  // namespace

PYBIND11_MODULE(_fmdiag, m) {
    m.doc() = "Feature-model testing and DirectDebug diagnosis";

    auto base = py::register_exception<Error>(m, "FmdiagError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<NoDiagnosisPossible>(m, "NoDiagnosisPossible", base.ptr());
    py::register_exception<InvalidConsiderationSet>(m, "InvalidConsiderationSet", base.ptr());
    py::register_exception<TooLarge>(m, "TooLarge", base.ptr());
    py::register_exception<Infeasible>(m, "Infeasible", base.ptr());
    py::register_exception<ShareUnreachable>(m, "ShareUnreachable", base.ptr());

    py::class_<FeatureModel>(m, "FeatureModel")
        .def_property_readonly("features", &FeatureModel::features)
        .def_property_readonly("root", &FeatureModel::root)
        .def_property_readonly("relationships",
                               [](const FeatureModel& fm) {
                                   py::list out;
                                   for (const auto& r : fm.relationships())
                                       out.append(py::make_tuple(std::string(keyword(r.kind)), r.parent, r.children));
                                   return out;
                               })
        .def_property_readonly("cross_tree",
                               [](const FeatureModel& fm) {
                                   py::list out;
                                   for (const auto& c : fm.cross_tree())
                                       out.append(py::make_tuple(std::string(keyword(c.kind)), c.lhs, c.rhs));
                                   return out;
                               })
        .def("__eq__", [](const FeatureModel& a, const FeatureModel& b) { return a == b; });

    m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));
    m.def("write_model", &write_model, py::arg("model"));

    py::class_<TestCase>(m, "TestCase")
        .def_readonly("label", &TestCase::label)
        .def_property_readonly("formula", [](const TestCase& t) { return to_string(t.formula); })
        .def_property_readonly("polarity", [](const TestCase& t) { return polarity_name(t.polarity); })
        .def("__repr__", [](const TestCase& t) {
            return "<TestCase " + t.label + " " + polarity_name(t.polarity) + " " + to_string(t.formula) + ">";
        });

    m.def(
        "parse_test_suite",
        [](const std::string& text, const FeatureModel* model) {
            TestSuite s = parse_test_suite(text, model);
            return py::make_tuple(s.positives, s.negatives);
        },
        py::arg("text"), py::arg("model") = nullptr);
    m.def("write_test_suite", &write_test_suite, py::arg("positives"),
          py::arg("negatives") = std::vector<TestCase>{});

    py::class_<ConstraintSet>(m, "ConstraintSet")
        .def_property_readonly("labels", &ConstraintSet::labels)
        .def_property_readonly("displays",
                               [](const ConstraintSet& cs) {
                                   std::vector<std::string> out;
                                   for (const auto& c : cs.constraints()) out.push_back(c.display);
                                   return out;
                               })
        .def_property_readonly("variables", [](const ConstraintSet& cs) { return cs.variables().names(); })
        .def("clauses",
             [](const ConstraintSet& cs, const std::string& label) {
                 auto i = cs.find(label);
                 if (!i) throw py::key_error(label);
                 return to_dimacs(cs[*i].clauses);
             })
        .def("without", &ConstraintSet::without, py::arg("labels"))
        .def("__len__", &ConstraintSet::size);

    m.def("encode", &encode, py::arg("model"));
    m.def("write_dimacs", &write_dimacs, py::arg("constraints"));

    m.def(
        "solve",
        [](std::size_t num_vars, const std::vector<std::vector<std::int64_t>>& clauses) -> py::object {
            ClauseDB db(num_vars);
            for (const auto& row : clauses) db.add(from_dimacs(row));
            Solver solver;
            SatResult r = solver.solve(db);
            if (!r.sat()) return py::none();
            return py::cast(*r.witness);
        },
        py::arg("num_vars"), py::arg("clauses"),
        "Returns a satisfying assignment (list of bool) or None.");

    py::class_<DebugSession>(m, "DebugSession")
        .def_property_readonly("consideration", &DebugSession::consideration_labels)
        .def_property_readonly("background", [](const DebugSession& s) { return s.labels(s.background); })
        .def_property_readonly("active", [](const DebugSession& s) { return s.test_labels(s.active); })
        .def_readonly("filtered", &DebugSession::filtered)
        .def_readonly("folded_negatives", &DebugSession::folded_negatives)
        .def_readonly("passed_negatives", &DebugSession::passed_negatives);

    m.def(
        "preprocess",
        [](const ConstraintSet& cs, const std::vector<TestCase>& positives, const std::vector<TestCase>& negatives,
           const std::optional<std::vector<std::string>>& consider) {
            return consider ? preprocess(cs, *consider, positives, negatives)
                            : preprocess(cs, positives, negatives);
        },
        py::arg("constraints"), py::arg("positives"), py::arg("negatives") = std::vector<TestCase>{},
        py::arg("consider") = py::none());

    py::class_<DiagnosisResult>(m, "DiagnosisResult")
        .def_readonly("gamma", &DiagnosisResult::gamma)
        .def_readonly("delta", &DiagnosisResult::delta)
        .def_readonly("filtered", &DiagnosisResult::filtered)
        .def_property_readonly("nodes", [](const DiagnosisResult& r) { return r.counters.nodes; })
        .def_property_readonly("solver_calls", [](const DiagnosisResult& r) { return r.counters.solver_calls; })
        .def_property_readonly("trace", [](const DiagnosisResult& r) {
            std::vector<std::string> out;
            for (const auto& n : r.trace) out.push_back(format_trace_node(n));
            return out;
        });

    m.def(
        "diagnose",
        [](const DebugSession& s, bool trace) { return diagnose(s, {.trace = trace, .validate = true}); },
        py::arg("session"), py::arg("trace") = false);
    m.def("format_report", &format_report, py::arg("session"), py::arg("result"));
    m.def("verify_minimal", &verify_minimal, py::arg("delta"), py::arg("session"));
    m.def("oracle_all_minimal_diagnoses", &oracle_all_minimal_diagnoses, py::arg("session"));

    py::class_<AnalysisReport>(m, "AnalysisReport")
        .def_readonly("void", &AnalysisReport::void_model)
        .def_readonly("dead_features", &AnalysisReport::dead_features)
        .def_readonly("false_optionals", &AnalysisReport::false_optionals)
        .def_readonly("solver_calls", &AnalysisReport::solver_calls);

    m.def("analyze", &analyze, py::arg("constraints"), py::arg("model"));
    m.def(
        "generate_dead_feature_tests",
        [](const FeatureModel& fm) { return generate_tests(fm, {TestKind::DeadFeature}); }, py::arg("model"));

    m.def(
        "synth",
        [](std::size_t num_constraints, std::uint64_t seed, std::size_t num_tests, double share) {
            SynthParams p;
            p.num_constraints = num_constraints;
            p.seed = seed;
            p.num_tests = num_tests;
            p.inconsistency_share = share;
            FeatureModel fm = synth_model(p);
            auto tests = synth_tests(fm, p);
            return py::make_tuple(std::move(fm), std::move(tests));
        },
        py::arg("num_constraints"), py::arg("seed") = 1, py::arg("num_tests") = 0, py::arg("share") = 0.30);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli_main(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the fmdiag CLI in-process; returns (exit_code, stdout, stderr).");
}
