#include "fmdiag/debug.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fmdiag/error.hpp"

namespace fmdiag {

std::vector<std::string> DebugSession::labels(std::span<const std::size_t> idx) const {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(groups[i].label);
    return out;
}

std::vector<std::string> DebugSession::test_labels(std::span<const std::size_t> idx) const {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(positives[i].test.label);
    return out;
}

namespace {

using ClauseRefs = std::vector<const Clause*>;

void append(ClauseRefs& refs, const std::vector<Clause>& clauses) {
    for (const auto& c : clauses) refs.push_back(&c);
}

ClauseRefs collect(const DebugSession& s, std::span<const std::size_t> a, std::span<const std::size_t> b = {}) {
    ClauseRefs refs;
    for (auto i : a) append(refs, s.groups[i].clauses);
    for (auto i : b) append(refs, s.groups[i].clauses);
    return refs;
}

bool consistent_with(Solver& solver, std::size_t num_vars, ClauseRefs& base, const std::vector<Clause>& extra) {
    const std::size_t mark = base.size();
    append(base, extra);
    const bool sat = solver.solve(num_vars, base).sat();
    base.resize(mark);
    return sat;
}

}  // namespace

DebugSession preprocess(const ConstraintSet& cs, const std::vector<std::string>& consider,
                        const std::vector<TestCase>& positives, const std::vector<TestCase>& negatives) {
    DebugSession s;
    std::unordered_map<std::string, std::size_t> by_label;
    for (const auto& c : cs.constraints()) {
        by_label.emplace(c.label, s.groups.size());
        s.groups.push_back({c.label, c.clauses});
    }
    std::vector<bool> in_c(s.groups.size(), false);
    for (const auto& label : consider) {
        auto it = by_label.find(label);
        if (it == by_label.end())
            throw InvalidConsiderationSet("consideration set names unknown constraint '" + label + "'");
        if (it->second == 0 || label == "c0")
            throw InvalidConsiderationSet("the root constraint c0 is background knowledge and cannot be diagnosed");
        if (in_c[it->second])
            throw InvalidConsiderationSet("constraint '" + label + "' listed twice in the consideration set");
        in_c[it->second] = true;
        s.consideration.push_back(it->second);
    }
    for (std::size_t i = 0; i < s.groups.size(); ++i)
        if (!in_c[i]) s.background.push_back(i);

    Var next_aux = static_cast<Var>(cs.variables().size());
    Solver solver;

    std::vector<std::size_t> folded;
    {
        ClauseRefs base = collect(s, s.consideration, s.background);
        for (const auto& t : negatives) {
            auto clauses = encode_formula(t.formula, cs.variables(), next_aux);
            if (consistent_with(solver, next_aux, base, clauses)) {
                Var aux = next_aux;
                auto negated = encode_formula(Formula::negation(t.formula), cs.variables(), aux);
                next_aux = aux;
                folded.push_back(s.groups.size());
                s.groups.push_back({"!" + t.label, std::move(negated)});
                s.folded_negatives.push_back(t.label);
            } else {
                s.passed_negatives.push_back(t.label);
            }
        }
    }
    s.background.insert(s.background.end(), folded.begin(), folded.end());

    for (const auto& t : positives) {
        auto clauses = encode_formula(t.formula, cs.variables(), next_aux);
        s.positives.push_back({t, std::move(clauses)});
    }
    s.num_vars = next_aux;

    ClauseRefs full = collect(s, s.consideration, s.background);
    ClauseRefs back = collect(s, s.background);
    for (std::size_t i = 0; i < s.positives.size(); ++i) {
        const auto& t = s.positives[i];
        if (consistent_with(solver, s.num_vars, full, t.clauses)) {
            s.filtered.push_back(t.test.label);
            continue;
        }
        if (!consistent_with(solver, s.num_vars, back, t.clauses)) throw NoDiagnosisPossible(t.test.label);
        s.active.push_back(i);
    }
    s.preprocess_calls = solver.count_calls();
    return s;
}

DebugSession preprocess(const ConstraintSet& cs, const std::vector<TestCase>& positives,
                        const std::vector<TestCase>& negatives) {
    std::vector<std::string> consider;
    for (std::size_t i = 1; i < cs.size(); ++i) consider.push_back(cs[i].label);
    return preprocess(cs, consider, positives, negatives);
}

// ---------------------------------------------------------------------------

DirectDebugger::Check DirectDebugger::is_consistent(std::span<const std::size_t> consideration,
                                                    std::span<const std::size_t> background,
                                                    std::span<const std::size_t> tests) {
    Check out;
    ClauseRefs base = collect(session_, consideration, background);
    for (auto t : tests) {
        if (!consistent_with(solver_, session_.num_vars, base, session_.positives[t].clauses))
            out.failing.push_back(t);
    }
    out.consistent = out.failing.empty();
    return out;
}

GroupList DirectDebugger::direct_debug(const GroupList& consideration, const GroupList& background,
                                       const TestList& tests) {
    ++nodes_;
    tests_checked_ += tests.size();
    std::size_t slot = 0;
    if (record_trace_) {
        slot = trace_.size();
        TraceNode node;
        node.id = nodes_;
        node.consideration = session_.labels(consideration);
        node.background = session_.labels(background);
        node.tests = session_.test_labels(tests);
        trace_.push_back(std::move(node));
    }

    const Check check = is_consistent(consideration, background, tests);
    GroupList result;
    if (check.consistent) {
        result = consideration;
    } else if (consideration.size() > 1) {
        const std::size_t k = consideration.size() / 2;
        const GroupList first(consideration.begin(), consideration.begin() + static_cast<std::ptrdiff_t>(k));
        const GroupList second(consideration.begin() + static_cast<std::ptrdiff_t>(k), consideration.end());
        // Both halves are checked against the tests still failing here.
        const GroupList gamma2 = direct_debug(first, background, check.failing);
        GroupList extended = background;
        extended.insert(extended.end(), gamma2.begin(), gamma2.end());
        const GroupList gamma1 = direct_debug(second, extended, check.failing);
        result = gamma2;
        result.insert(result.end(), gamma1.begin(), gamma1.end());
    }

    if (record_trace_) {
        trace_[slot].failing = session_.test_labels(check.failing);
        trace_[slot].result = session_.labels(result);
    }
    return result;
}

namespace {

std::string braces(const std::vector<std::string>& items) {
    std::string out = "{";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out + "}";
}

}  // namespace

std::string format_trace_node(const TraceNode& n) {
    std::ostringstream out;
    out << '[' << n.id << "] C=" << braces(n.consideration) << " B=" << braces(n.background)
        << " T=" << braces(n.tests) << " T'=" << braces(n.failing) << " return=" << braces(n.result);
    return out.str();
}

DiagnosisResult diagnose(const DebugSession& session, const DiagnoseOptions& options) {
    DiagnosisResult r;
    r.filtered = session.filtered;
    r.counters.preprocess_calls = session.preprocess_calls;
    GroupList gamma;
    if (session.active.empty()) {
        gamma = session.consideration;
    } else {
        DirectDebugger dbg(session, options.trace);
        gamma = dbg.direct_debug(session.consideration, session.background, session.active);
        r.counters.solver_calls = dbg.solver_calls();
        r.counters.nodes = dbg.nodes();
        r.counters.tests_checked = dbg.tests_checked();
        r.trace = dbg.trace();
    }
    std::unordered_set<std::size_t> keep(gamma.begin(), gamma.end());
    for (auto i : session.consideration) {
        (keep.count(i) ? r.gamma : r.delta).push_back(session.groups[i].label);
    }
    if (options.validate) validate_diagnosis(session, r.delta);
    return r;
}

namespace {

// C − removed, as group indices.
GroupList remaining(const DebugSession& s, const std::unordered_set<std::string>& removed) {
    GroupList out;
    for (auto i : s.consideration)
        if (!removed.count(s.groups[i].label)) out.push_back(i);
    return out;
}

bool repairs(Solver& solver, const DebugSession& s, const GroupList& kept, std::span<const std::size_t> tests) {
    ClauseRefs base = collect(s, kept, s.background);
    for (auto t : tests)
        if (!consistent_with(solver, s.num_vars, base, s.positives[t].clauses)) return false;
    return true;
}

}  // namespace

void validate_diagnosis(const DebugSession& session, const std::vector<std::string>& delta) {
    Solver solver;
    const GroupList kept = remaining(session, {delta.begin(), delta.end()});
    ClauseRefs base = collect(session, kept, session.background);
    for (const auto& t : session.positives) {
        if (!consistent_with(solver, session.num_vars, base, t.clauses))
            throw InternalError("diagnosis leaves positive test " + t.test.label + " inconsistent");
    }
}

bool verify_minimal(const std::vector<std::string>& delta, const DebugSession& session) {
    const auto c_labels = session.consideration_labels();
    const std::unordered_set<std::string> in_c(c_labels.begin(), c_labels.end());
    std::unordered_set<std::string> removed;
    for (const auto& d : delta) {
        if (!in_c.count(d) || !removed.insert(d).second) return false;
    }
    Solver solver;
    if (!repairs(solver, session, remaining(session, removed), session.active)) return false;
    for (const auto& d : delta) {
        removed.erase(d);
        const bool still_repairs = repairs(solver, session, remaining(session, removed), session.active);
        removed.insert(d);
        if (still_repairs) return false;
    }
    return true;
}

std::vector<std::vector<std::string>> oracle_all_minimal_diagnoses(const DebugSession& session) {
    const std::size_t n = session.consideration.size();
    if (n > kOracleMaxConsideration)
        throw TooLarge("oracle enumeration is limited to " + std::to_string(kOracleMaxConsideration) +
                       " consideration constraints, got " + std::to_string(n));
    Solver solver;
    const std::uint32_t all = (1u << n) - 1u;
    auto kept_groups = [&](std::uint32_t kept) {
        GroupList g;
        for (std::size_t i = 0; i < n; ++i)
            if (kept & (1u << i)) g.push_back(session.consideration[i]);
        return g;
    };
    auto test_holds = [&](std::uint32_t kept, std::size_t t) {
        const std::size_t one[] = {t};
        return repairs(solver, session, kept_groups(kept), one);
    };

    // Subsets of C that, together with B, contradict some active test. Any
    // kept set containing one of them fails; each is shrunk to a minimal one
    // by deletion so that it covers as many later candidates as possible.
    std::vector<std::uint32_t> conflicts;
    std::vector<std::uint32_t> found;  // bitmasks over positions in C
    std::vector<std::vector<std::string>> out;
    for (std::size_t size = 0; size <= n; ++size) {
        // Lexicographic combinations of positions 0..n-1.
        std::vector<std::size_t> pick(size);
        for (std::size_t i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            std::uint32_t mask = 0;
            for (auto p : pick) mask |= 1u << p;
            const std::uint32_t kept = all & ~mask;
            const bool superset = std::any_of(found.begin(), found.end(),
                                              [&](std::uint32_t f) { return (f & mask) == f; });
            const bool blocked = superset || std::any_of(conflicts.begin(), conflicts.end(),
                                                         [&](std::uint32_t k) { return (k & kept) == k; });
            if (!blocked) {
                bool ok = true;
                for (auto t : session.active) {
                    if (test_holds(kept, t)) continue;
                    std::uint32_t conflict = kept;
                    for (std::size_t i = 0; i < n; ++i) {
                        const std::uint32_t smaller = conflict & ~(1u << i);
                        if (smaller != conflict && !test_holds(smaller, t)) conflict = smaller;
                    }
                    conflicts.push_back(conflict);
                    ok = false;
                    break;
                }
                if (ok) {
                    found.push_back(mask);
                    std::vector<std::string> diag;
                    for (auto p : pick) diag.push_back(session.groups[session.consideration[p]].label);
                    out.push_back(std::move(diag));
                }
            }
            // advance
            std::size_t i = size;
            while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace fmdiag

namespace fmdiag {

std::string format_report(const DebugSession& session, const DiagnosisResult& result) {
    auto line = [](const char* key, const std::vector<std::string>& items) {
        std::string s = key;
        s += ':';
        for (const auto& i : items) s += ' ' + i;
        return s + '\n';
    };
    std::string out;
    for (const auto& node : result.trace) out += format_trace_node(node) + '\n';
    out += line("filtered", result.filtered);
    if (!session.folded_negatives.empty() || !session.passed_negatives.empty()) {
        out += line("folded-negative", session.folded_negatives);
        out += line("passed-negative", session.passed_negatives);
    }
    out += line("gamma", result.gamma);
    out += line("delta", result.delta);
    out += "nodes: " + std::to_string(result.counters.nodes) +
           "  solver-calls: " + std::to_string(result.counters.solver_calls) + '\n';
    return out;
}

}  // namespace fmdiag
