// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "fmdiag/analysis.hpp"
#include "fmdiag/bench.hpp"
#include "fmdiag/cli.hpp"
#include "fmdiag/debug.hpp"
#include "fmdiag/encode.hpp"
#include "fmdiag/error.hpp"
#include "fmdiag/synth.hpp"
#include "oracles.hpp"
#include "test_data.hpp"

using namespace fmdiag;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Failure {
    std::string reason;
};

void require(bool ok, const std::string& reason) {
    if (!ok) throw Failure{reason};
}

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
    return s;
}

const std::string kModel = testdata::data_path("survey.fm");
const std::string kTests = testdata::data_path("paper.tc");

FeatureModel survey() { return parse_model(testdata::read_data("survey.fm")); }

DebugSession survey_session() {
    const FeatureModel m = survey();
    const TestSuite suite = parse_test_suite(testdata::read_data("paper.tc"), &m);
    return preprocess(encode(m), suite.positives, suite.negatives);
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli_main(args, out, err);
    return out.str();
}

void criterion_survey_example() {
    const auto start = Clock::now();
    int code = 0;
    const std::string out = run_cli({"diagnose", "--model", kModel, "--tests", kTests}, code);
    const double elapsed = seconds_since(start);
    require(code == 0, "exit code " + std::to_string(code));
    require(out.find("filtered: t4\n") != std::string::npos, "filtered line missing");
    require(out.find("gamma: c2 c3 c4 c5 c6\n") != std::string::npos, "gamma mismatch");
    require(out.find("delta: c1 c7 c8\n") != std::string::npos, "delta mismatch");
    require(out.find("nodes: 11 ") != std::string::npos, "node count mismatch");
    require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
}

void criterion_trace() {
    int code = 0;
    const std::string out = run_cli({"diagnose", "--model", kModel, "--tests", kTests, "--trace"}, code);
    require(code == 0, "exit code " + std::to_string(code));
    require(out == testdata::read_data("golden/survey_trace.txt"), "trace differs from golden file");
}

void criterion_oracle() {
    const auto all = oracle_all_minimal_diagnoses(survey_session());
    const std::vector<std::vector<std::string>> expected{{"c1", "c2"}, {"c1", "c7", "c8"}};
    require(all == expected, "oracle returned " + std::to_string(all.size()) + " diagnoses");
}

void criterion_analysis() {
    const FeatureModel m = survey();
    const ConstraintSet cs = encode(m);
    auto contains = [](const std::vector<std::string>& xs, const std::string& x) {
        return std::find(xs.begin(), xs.end(), x) != xs.end();
    };
    const AnalysisReport before = analyze(cs, m);
    require(contains(before.dead_features, "nolicense"), "nolicense not dead: " + join(before.dead_features));
    require(contains(before.false_optionals, "statistics"),
            "statistics not false optional: " + join(before.false_optionals));
    const AnalysisReport after = analyze(cs.without({"c1", "c7", "c8"}), m);
    require(!contains(after.dead_features, "nolicense"), "nolicense still dead after repair");
    require(!contains(after.false_optionals, "statistics"), "statistics still false optional after repair");
}

// Relationship and cross-tree semantics written directly from the logic
// formulas; bit 0 is the parent (or left-hand side), bits 1..k the children.
bool formula_holds(RelationKind kind, std::size_t k, std::uint64_t bits) {
    using oracle::bit;
    const bool p = bit(bits, 0);
    switch (kind) {
        case RelationKind::Mandatory: return p == bit(bits, 1);
        case RelationKind::Optional: return !bit(bits, 1) || p;
        case RelationKind::Alternative:
            for (std::size_t i = 1; i <= k; ++i) {
                bool others = false;
                for (std::size_t j = 1; j <= k; ++j) others = others || (j != i && bit(bits, j));
                if (bit(bits, i) != (!others && p)) return false;
            }
            return true;
        case RelationKind::Or: {
            bool any = false;
            for (std::size_t i = 1; i <= k; ++i) any = any || bit(bits, i);
            return p == any;
        }
    }
    return false;
}

void check_truth_table(const ConstraintSet& cs, std::size_t index, std::size_t shown,
                       const std::function<bool(std::uint64_t)>& expected, const std::string& what) {
    const auto& clauses = cs[index].clauses;
    std::size_t total = shown;
    for (const auto& c : clauses)
        for (Lit l : c) total = std::max<std::size_t>(total, l.var() + 1);
    require(oracle::projected_models(clauses, shown, total) == oracle::models_of(shown, expected),
            what + " truth table differs");
}

void criterion_encoding() {
    for (RelationKind kind : {RelationKind::Mandatory, RelationKind::Optional, RelationKind::Alternative,
                              RelationKind::Or}) {
        const bool group = kind == RelationKind::Alternative || kind == RelationKind::Or;
        for (std::size_t k = group ? 2 : 1; k <= (group ? 4u : 1u); ++k) {
            std::vector<std::string> names{"p"};
            Relationship rel{kind, "p", {}};
            for (std::size_t i = 1; i <= k; ++i) {
                names.push_back("x" + std::to_string(i));
                rel.children.push_back(names.back());
            }
            const ConstraintSet cs = encode(FeatureModel::create(names, "p", {rel}, {}));
            check_truth_table(cs, 1, k + 1, [&](std::uint64_t b) { return formula_holds(kind, k, b); },
                              std::string(keyword(kind)) + " k=" + std::to_string(k));
        }
    }
    for (CrossTreeKind kind : {CrossTreeKind::Requires, CrossTreeKind::Excludes}) {
        // a, b are siblings under p so the constraint is a legal cross-tree one.
        const FeatureModel m = FeatureModel::create(
            {"p", "a", "b"}, "p", {{RelationKind::Optional, "p", {"a"}}, {RelationKind::Optional, "p", {"b"}}},
            {{kind, "a", "b"}});
        const ConstraintSet cs = encode(m);
        const bool req = kind == CrossTreeKind::Requires;
        check_truth_table(
            cs, 3, 3,
            [&](std::uint64_t b) {
                const bool a = oracle::bit(b, 1), c = oracle::bit(b, 2);
                return req ? (!a || c) : !(a && c);
            },
            std::string(keyword(kind)));
    }
    const FeatureModel m = survey();
    const ConstraintSet cs = encode(m);
    const std::set<std::string> off{"nolicense"};
    std::uint64_t config = 0;
    for (std::size_t i = 0; i < m.features().size(); ++i)
        if (!off.count(m.features()[i])) config |= std::uint64_t{1} << cs.variables().at(m.features()[i]);
    for (std::size_t i = 0; i < cs.size(); ++i)
        require(oracle::cnf_holds(cs[i].clauses, config), "example configuration violates " + cs[i].label);
}

void criterion_properties() {
    const auto start = Clock::now();
    constexpr std::uint64_t kInstances = 500;
    std::size_t oracle_checked = 0;
    for (std::uint64_t i = 0; i < kInstances; ++i) {
        Rng shape(derive_seed(2024, {i}));
        SynthParams p;
        p.num_constraints = shape.between(8, 40);
        p.num_tests = shape.between(2, 20);
        p.inconsistency_share = 0.3;
        p.seed = derive_seed(7, {i});
        const std::string tag = "instance " + std::to_string(i) + " (|CF|=" + std::to_string(p.num_constraints) +
                                ", |T|=" + std::to_string(p.num_tests) + ")";

        const FeatureModel m = synth_model(p);
        const ConstraintSet cs = encode(m);
        const auto tests = synth_tests(m, p);
        const DebugSession s = preprocess(cs, tests, {});
        const DiagnosisResult r = diagnose(s, {.trace = true, .validate = true});
        require(verify_minimal(r.delta, s), tag + ": delta not minimal");

        std::uint64_t sum_tests = 0;
        for (const auto& node : r.trace) sum_tests += node.tests.size();
        require(r.counters.solver_calls == sum_tests, tag + ": solver-call counter differs from sum of |T|");

        if (s.consideration.size() <= kOracleMaxConsideration) {
            const auto all = oracle_all_minimal_diagnoses(s);
            require(std::find(all.begin(), all.end(), r.delta) != all.end(), tag + ": delta not in oracle set");
            ++oracle_checked;
        }

        std::vector<std::string> order = s.consideration_labels();
        for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[shape.below(k)]);
        const DebugSession permuted = preprocess(cs, order, tests, {});
        const DiagnosisResult pr = diagnose(permuted);
        require(verify_minimal(pr.delta, permuted), tag + ": permuted delta not minimal");
    }
    require(oracle_checked >= 100, "only " + std::to_string(oracle_checked) + " instances had |C| <= 20");
    const double elapsed = seconds_since(start);
    require(elapsed < 300.0, "took " + std::to_string(elapsed) + " s");
}

void criterion_performance() {
    BenchConfig config;
    if (const char* env = std::getenv("FMDIAG_SEED")) config.seed = std::stoull(env);
    const BenchReport report = run_bench(config);
    for (const auto& c : report.cells)
        if (c.error)
            require(false, "cell (" + std::to_string(c.t_pi) + ", " + std::to_string(c.cf) + ") failed: " + *c.error);
    const BenchCell& target = report.cell(100, 1000);
    double worst = 0.0;
    for (const auto& s : target.samples) worst = std::max(worst, s.diagnosis_ms);
    std::cout << report.to_table();
    require(worst < 60000.0, "cell (100, 1000) took " + std::to_string(worst) + " ms");
    const auto violations = monotone_growth_violations(report);
    if (!violations.empty()) require(false, violations.front());
}

void criterion_preprocessing() {
    const FeatureModel m = survey();
    const ConstraintSet cs = encode(m);
    const TestSuite bad = parse_test_suite("positive payment=f\npositive survey=f\n", &m);
    try {
        preprocess(cs, bad.positives, {});
        require(false, "no exception for a test contradicting B");
    } catch (const NoDiagnosisPossible& e) {
        require(e.test_label() == "t2", "exception names " + e.test_label());
    }
    const TestSuite ok = parse_test_suite("positive singlechoice=f\npositive license=t\n", &m);
    const DiagnosisResult r = diagnose(preprocess(cs, ok.positives, {}));
    require(r.delta.empty(), "delta not empty: " + join(r.delta));
    require(r.counters.nodes == 0, "DirectDebug invoked " + std::to_string(r.counters.nodes) + " times");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria{
        {"survey example end to end", criterion_survey_example},
        {"trace fidelity", criterion_trace},
        {"ground-truth diagnoses", criterion_oracle},
        {"analysis claims", criterion_analysis},
        {"encoding fidelity", criterion_encoding},
        {"property suite", criterion_properties},
        {"desk-scale performance", criterion_performance},
        {"preprocessing contract", criterion_preprocessing},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = Clock::now();
        std::string reason;
        try {
            criteria[i].second();
        } catch (const Failure& f) {
            reason = f.reason;
        } catch (const std::exception& e) {
            reason = std::string("exception: ") + e.what();
        }
        std::ostringstream line;
        line << (reason.empty() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
             << seconds_since(start) << " s)";
        if (!reason.empty()) line << ": " << reason;
        std::cout << line.str() << std::endl;
        failed += reason.empty() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
