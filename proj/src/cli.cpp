#include "fmdiag/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fmdiag/analysis.hpp"
#include "fmdiag/bench.hpp"
#include "fmdiag/debug.hpp"
#include "fmdiag/encode.hpp"
#include "fmdiag/error.hpp"
#include "fmdiag/feature_model.hpp"
#include "fmdiag/synth.hpp"
#include "fmdiag/test_suite.hpp"

namespace fmdiag {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
}

FeatureModel load_model(const std::string& path) {
    try {
        return parse_model(read_file(path));
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

TestSuite load_tests(const std::string& path, const FeatureModel& model) {
    try {
        return parse_test_suite(read_file(path), &model);
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

std::uint64_t default_seed(std::uint64_t fallback) {
    if (const char* env = std::getenv("FMDIAG_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(std::string("FMDIAG_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return fallback;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Test and debug feature models with DirectDebug", "fmdiag"};
    app.require_subcommand(1);

    std::string model_path, tests_path, out_path;

    auto* check = app.add_subcommand("check", "Report SAT/UNSAT of every test against the model");
    check->add_option("--model", model_path, "Feature model (.fm)")->required();
    check->add_option("--tests", tests_path, "Test suite (.tc)")->required();

    auto* enc = app.add_subcommand("encode", "Dump the labeled CNF encoding");
    enc->add_option("--model", model_path, "Feature model (.fm)")->required();
    enc->add_option("--out", out_path, "Output file (default: stdout)");

    std::vector<std::string> consider;
    bool trace = false;
    auto* diag = app.add_subcommand("diagnose", "Compute a minimal diagnosis");
    diag->add_option("--model", model_path, "Feature model (.fm)")->required();
    diag->add_option("--tests", tests_path, "Test suite (.tc)")->required();
    diag->add_option("--consider", consider, "Consideration set, e.g. c1,c2,c3 (default: all but c0)")
        ->delimiter(',');
    diag->add_flag("--trace", trace, "Print one line per DirectDebug invocation");

    auto* ana = app.add_subcommand("analyze", "Void, dead-feature and false-optional analysis");
    ana->add_option("--model", model_path, "Feature model (.fm)")->required();

    std::string kind = "dead";
    auto* gen = app.add_subcommand("gen-tests", "Generate positive tests from analysis operations");
    gen->add_option("--model", model_path, "Feature model (.fm)")->required();
    gen->add_option("--kind", kind, "Test kind")->check(CLI::IsMember({"dead"}));
    gen->add_option("--out", out_path, "Output file (default: stdout)");

    SynthParams sp;
    std::optional<std::uint64_t> synth_seed;
    std::string out_model, out_tests;
    auto* syn = app.add_subcommand("synth", "Generate a random feature model and test suite");
    syn->add_option("--constraints", sp.num_constraints, "|CF| without c0")->required();
    syn->add_option("--tests", sp.num_tests, "Number of positive tests");
    syn->add_option("--share", sp.inconsistency_share, "Share of inconsistency-inducing tests");
    syn->add_option("--seed", synth_seed, "Seed (default: $FMDIAG_SEED or 1)");
    syn->add_option("--ctc-ratio", sp.ctc_ratio, "Minimum share of cross-tree constraints");
    syn->add_option("--p-mandatory", sp.weight_mandatory, "Weight of mandatory relationships");
    syn->add_option("--p-optional", sp.weight_optional, "Weight of optional relationships");
    syn->add_option("--p-alternative", sp.weight_alternative, "Weight of alternative groups");
    syn->add_option("--p-or", sp.weight_or, "Weight of or groups");
    syn->add_option("--requires-share", sp.requires_share, "Share of requires among cross-tree constraints");
    syn->add_option("--out-model", out_model, "Model output (default: stdout)");
    syn->add_option("--out-tests", out_tests, "Test-suite output");

    BenchConfig bc;
    std::optional<std::uint64_t> bench_seed;
    std::string csv_path;
    auto* ben = app.add_subcommand("bench", "Run the runtime grid benchmark");
    ben->add_option("--rows", bc.rows, "|T_pi| values")->delimiter(',');
    ben->add_option("--cols", bc.cols, "|CF| values")->delimiter(',');
    ben->add_option("--reps", bc.reps, "Repetitions per cell")->check(CLI::PositiveNumber);
    ben->add_option("--seed", bench_seed, "Seed (default: $FMDIAG_SEED or 42)");
    ben->add_option("--share", bc.inconsistency_share, "Share of inconsistency-inducing tests");
    ben->add_option("--jobs", bc.jobs, "Worker threads")->check(CLI::PositiveNumber);
    ben->add_option("--out", csv_path, "CSV output file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    try {
        if (check->parsed()) {
            const FeatureModel model = load_model(model_path);
            const TestSuite suite = load_tests(tests_path, model);
            const ConstraintSet cs = encode(model);
            const ClauseDB db = cs.to_clause_db();
            Solver solver;
            auto report = [&](const TestCase& t) {
                Var aux = static_cast<Var>(cs.variables().size());
                const auto clauses = encode_formula(t.formula, cs.variables(), aux);
                const bool sat = solver.solve(db, clauses).sat();
                out << t.label << ' ' << (t.polarity == Polarity::Positive ? "positive" : "negative") << ' '
                    << (sat ? "SAT" : "UNSAT") << '\n';
            };
            for (const auto& t : suite.positives) report(t);
            for (const auto& t : suite.negatives) report(t);
        } else if (enc->parsed()) {
            write_output(out_path, write_dimacs(encode(load_model(model_path))), out);
        } else if (diag->parsed()) {
            const FeatureModel model = load_model(model_path);
            const TestSuite suite = load_tests(tests_path, model);
            const ConstraintSet cs = encode(model);
            const DebugSession session = consider.empty()
                                             ? preprocess(cs, suite.positives, suite.negatives)
                                             : preprocess(cs, consider, suite.positives, suite.negatives);
            const DiagnosisResult result = diagnose(session, {.trace = trace, .validate = true});
            out << format_report(session, result);
        } else if (ana->parsed()) {
            const FeatureModel model = load_model(model_path);
            out << format_analysis(analyze(encode(model), model));
        } else if (gen->parsed()) {
            const FeatureModel model = load_model(model_path);
            write_output(out_path, write_test_suite(generate_tests(model, {TestKind::DeadFeature})), out);
        } else if (syn->parsed()) {
            sp.seed = synth_seed ? *synth_seed : default_seed(1);
            const FeatureModel model = synth_model(sp);
            write_output(out_model, write_model(model), out);
            if (!out_tests.empty()) write_output(out_tests, write_test_suite(synth_tests(model, sp)), out);
        } else if (ben->parsed()) {
            bc.seed = bench_seed ? *bench_seed : default_seed(42);
            const BenchReport report = run_bench(bc);
            if (!csv_path.empty()) write_output(csv_path, report.to_csv(), out);
            out << report.to_table();
            for (const auto& c : report.cells)
                if (c.error) err << "cell (" << c.t_pi << ", " << c.cf << ") failed: " << *c.error << '\n';
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace fmdiag
