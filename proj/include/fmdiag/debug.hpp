#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fmdiag/encode.hpp"
#include "fmdiag/sat.hpp"
#include "fmdiag/test_suite.hpp"

namespace fmdiag {

/// A labeled group of clauses the debugger reasons about as one unit: a
/// feature-model constraint or a negated negative test.
struct ClauseGroup {
    std::string label;
    std::vector<Clause> clauses;
};

struct EncodedTest {
    TestCase test;
    std::vector<Clause> clauses;
};

/// Indices into DebugSession::groups.
using GroupList = std::vector<std::size_t>;
/// Indices into DebugSession::positives.
using TestList = std::vector<std::size_t>;

/// Everything DirectDebug needs, produced by `preprocess`.
///
/// Invariants (established by preprocess):
///  - `consideration` and `background` are disjoint; c0 is in `background`.
///  - every test in `active` is consistent with the background alone and
///    inconsistent with consideration + background.
struct DebugSession {
    std::vector<ClauseGroup> groups;
    GroupList consideration;
    GroupList background;
    std::vector<EncodedTest> positives;  // the full positive suite
    TestList active;                     // positives forwarded to DirectDebug
    std::vector<std::string> filtered;   // positives consistent with C + B
    std::vector<std::string> folded_negatives;  // negatives added to B negated
    std::vector<std::string> passed_negatives;  // negatives already inconsistent
    std::size_t num_vars = 0;
    std::uint64_t preprocess_calls = 0;

    std::vector<std::string> labels(std::span<const std::size_t> groups_idx) const;
    std::vector<std::string> test_labels(std::span<const std::size_t> tests_idx) const;
    std::vector<std::string> consideration_labels() const { return labels(consideration); }
};

/// Builds a session: C from `consider` (in the given order), B = c0 plus every
/// constraint not in C. Negative tests consistent with C + B are folded into B
/// in negated form; negative tests are checked against the unfolded C + B, so
/// the result does not depend on their order. Positive tests inconsistent with
/// C + B become active.
///
/// Throws InvalidConsiderationSet if a label is unknown, repeated, or c0, and
/// NoDiagnosisPossible if a positive test contradicts B on its own.
DebugSession preprocess(const ConstraintSet& cs, const std::vector<std::string>& consider,
                        const std::vector<TestCase>& positives, const std::vector<TestCase>& negatives);

/// Same with C = every constraint except c0.
DebugSession preprocess(const ConstraintSet& cs, const std::vector<TestCase>& positives,
                        const std::vector<TestCase>& negatives);

/// One DirectDebug invocation, as recorded for `--trace`.
struct TraceNode {
    std::size_t id = 0;  // preorder, starting at 1
    std::vector<std::string> consideration;
    std::vector<std::string> background;
    std::vector<std::string> tests;
    std::vector<std::string> failing;
    std::vector<std::string> result;
};

std::string format_trace_node(const TraceNode& node);

/// Runs IsConsistent and DirectDebug against one session with its own solver.
class DirectDebugger {
public:
    struct Check {
        bool consistent = true;
        TestList failing;  // order of the input preserved
    };

    explicit DirectDebugger(const DebugSession& session, bool record_trace = false)
        : session_(session), record_trace_(record_trace) {}

    /// One solver call per test, in order.
    Check is_consistent(std::span<const std::size_t> consideration, std::span<const std::size_t> background,
                        std::span<const std::size_t> tests);

    /// Returns the maximal satisfiable subset of `consideration`, in its order.
    GroupList direct_debug(const GroupList& consideration, const GroupList& background, const TestList& tests);

    std::uint64_t solver_calls() const noexcept { return solver_.count_calls(); }
    std::uint64_t nodes() const noexcept { return nodes_; }
    /// Sum over invocations of the size of the test list at that invocation.
    std::uint64_t tests_checked() const noexcept { return tests_checked_; }
    const std::vector<TraceNode>& trace() const noexcept { return trace_; }

private:
    const DebugSession& session_;
    Solver solver_;
    bool record_trace_;
    std::uint64_t nodes_ = 0;
    std::uint64_t tests_checked_ = 0;
    std::vector<TraceNode> trace_;
};

struct DiagnosisCounters {
    std::uint64_t solver_calls = 0;  // during DirectDebug only
    std::uint64_t nodes = 0;
    std::uint64_t tests_checked = 0;
    std::uint64_t preprocess_calls = 0;
};

struct DiagnosisResult {
    std::vector<std::string> gamma;  // in consideration order
    std::vector<std::string> delta;  // in consideration order
    std::vector<std::string> filtered;
    DiagnosisCounters counters;
    std::vector<TraceNode> trace;
};

struct DiagnoseOptions {
    bool trace = false;
    /// Re-check Γ + B against every positive test afterwards.
    bool validate = true;
};

/// Δ = C − DirectDebug(C, B, active). With no active tests Δ is empty and
/// DirectDebug is not invoked. Validation failure throws InternalError.
DiagnosisResult diagnose(const DebugSession& session, const DiagnoseOptions& options = {});

/// Throws InternalError unless (C − delta) + B is consistent with every
/// positive test of the session.
void validate_diagnosis(const DebugSession& session, const std::vector<std::string>& delta);

/// True iff `delta` repairs every active test and no single constraint can be
/// put back without breaking one. Labels outside C yield false.
bool verify_minimal(const std::vector<std::string>& delta, const DebugSession& session);

/// Every subset-minimal diagnosis by exhaustive enumeration (increasing size,
/// lexicographic in C order within a size). Throws TooLarge when |C| > 20.
std::vector<std::vector<std::string>> oracle_all_minimal_diagnoses(const DebugSession& session);

inline constexpr std::size_t kOracleMaxConsideration = 20;

}  // namespace fmdiag

namespace fmdiag {

/// The `diagnose` report: optional trace lines, then filtered/gamma/delta
/// and the counters.
std::string format_report(const DebugSession& session, const DiagnosisResult& result);

}  // namespace fmdiag
