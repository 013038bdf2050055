#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmdiag/feature_model.hpp"
#include "fmdiag/formula.hpp"
#include "fmdiag/sat.hpp"

namespace fmdiag {

/// Which model element a constraint encodes.
struct Provenance {
    enum class Kind { Root, Relationship, CrossTree };
    Kind kind = Kind::Root;
    std::size_t index = 0;  // into relationships() or cross_tree(); 0 for Root

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct LabeledConstraint {
    std::string label;
    std::vector<Clause> clauses;
    Provenance provenance;
    std::string display;
};

/// Feature name <-> variable index. Feature variables occupy 0..size()-1;
/// auxiliary variables introduced by encode_formula are numbered after them.
class VariableTable {
public:
    VariableTable() = default;
    explicit VariableTable(std::vector<std::string> names) : names_(std::move(names)) {}

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(Var v) const { return names_.at(v); }
    std::optional<Var> find(std::string_view name) const;
    /// Throws UnknownFeature.
    Var at(std::string_view name) const;

private:
    std::vector<std::string> names_;
};

/// The labeled constraint set of a feature model: c0 is the root constraint,
/// followed by one constraint per relationship in model order and then one
/// per cross-tree constraint.
class ConstraintSet {
public:
    ConstraintSet() = default;
    ConstraintSet(std::vector<LabeledConstraint> constraints, VariableTable vars)
        : constraints_(std::move(constraints)), vars_(std::move(vars)) {}

    const std::vector<LabeledConstraint>& constraints() const noexcept { return constraints_; }
    const VariableTable& variables() const noexcept { return vars_; }
    std::size_t size() const noexcept { return constraints_.size(); }
    const LabeledConstraint& operator[](std::size_t i) const { return constraints_[i]; }

    std::optional<std::size_t> find(std::string_view label) const;
    std::vector<std::string> labels() const;

    /// All clauses flattened, constraint order preserved.
    ClauseDB to_clause_db() const;

    /// Copy without the named constraints (labels unchanged for the rest).
    ConstraintSet without(const std::vector<std::string>& labels) const;

private:
    std::vector<LabeledConstraint> constraints_;
    VariableTable vars_;
};

ConstraintSet encode(const FeatureModel& model);

/// The formula each constraint stands for, as a Formula tree over bare
/// feature atoms. Used for display strings and for semantic checks.
Formula relationship_formula(const Relationship& rel);
Formula cross_tree_formula(const CrossTreeConstraint& ctc);

/// Converts `f` to an equisatisfiable CNF. A literal or a conjunction of
/// literals becomes unit clauses with no auxiliaries. Otherwise the formula
/// is put in negation normal form and every non-clausal subformula gets a
/// fresh variable taken from `next_aux` (incremented per allocation); the
/// models of the result projected onto feature variables are exactly the
/// models of `f`. Throws UnknownFeature.
std::vector<Clause> encode_formula(const Formula& f, const VariableTable& vars, Var& next_aux);

/// DIMACS-style dump with per-constraint provenance comments:
///
///     p cnf <vars> <clauses>
///     c var <i> <name>
///     c label <ci> clauses <j>..<k> :: <display>
///     <clause> 0
std::string write_dimacs(const ConstraintSet& cs);

}  // namespace fmdiag
