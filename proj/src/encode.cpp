#include "fmdiag/encode.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "fmdiag/error.hpp"

namespace fmdiag {

std::optional<Var> VariableTable::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Var>(it - names_.begin());
}

Var VariableTable::at(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw UnknownFeature(std::string(name));
}

std::optional<std::size_t> ConstraintSet::find(std::string_view label) const {
    for (std::size_t i = 0; i < constraints_.size(); ++i)
        if (constraints_[i].label == label) return i;
    return std::nullopt;
}

std::vector<std::string> ConstraintSet::labels() const {
    std::vector<std::string> out;
    out.reserve(constraints_.size());
    for (const auto& c : constraints_) out.push_back(c.label);
    return out;
}

ClauseDB ConstraintSet::to_clause_db() const {
    ClauseDB db(vars_.size());
    for (const auto& c : constraints_)
        for (const auto& cl : c.clauses) db.add(cl);
    return db;
}

ConstraintSet ConstraintSet::without(const std::vector<std::string>& labels) const {
    std::unordered_set<std::string> drop(labels.begin(), labels.end());
    std::vector<LabeledConstraint> kept;
    for (const auto& c : constraints_)
        if (!drop.count(c.label)) kept.push_back(c);
    return ConstraintSet(std::move(kept), vars_);
}

Formula relationship_formula(const Relationship& rel) {
    auto atom = [](const std::string& n) { return Formula::atom(n); };
    switch (rel.kind) {
        case RelationKind::Mandatory: return Formula::iff(atom(rel.parent), atom(rel.children[0]));
        case RelationKind::Optional: return Formula::implies(atom(rel.children[0]), atom(rel.parent));
        case RelationKind::Alternative: {
            // f_i <-> (no other child & parent), for every child f_i
            std::vector<Formula> parts;
            for (std::size_t i = 0; i < rel.children.size(); ++i) {
                std::vector<Formula> rhs;
                for (std::size_t j = 0; j < rel.children.size(); ++j)
                    if (j != i) rhs.push_back(Formula::atom(rel.children[j], false));
                rhs.push_back(atom(rel.parent));
                parts.push_back(Formula::iff(atom(rel.children[i]), Formula::conjunction(std::move(rhs))));
            }
            Formula f;
            f.op = Formula::Op::And;
            f.args = std::move(parts);
            return f;
        }
        case RelationKind::Or: {
            std::vector<Formula> any;
            for (const auto& c : rel.children) any.push_back(atom(c));
            return Formula::iff(atom(rel.parent), Formula::disjunction(std::move(any)));
        }
    }
    return {};
}

Formula cross_tree_formula(const CrossTreeConstraint& ctc) {
    if (ctc.kind == CrossTreeKind::Requires)
        return Formula::implies(Formula::atom(ctc.lhs), Formula::atom(ctc.rhs));
    return Formula::negation(Formula::conjunction({Formula::atom(ctc.lhs), Formula::atom(ctc.rhs)}));
}

namespace {

std::vector<Clause> relationship_clauses(const Relationship& rel, const VariableTable& vars) {
    const Var a = vars.at(rel.parent);
    std::vector<Var> kids;
    for (const auto& c : rel.children) kids.push_back(vars.at(c));
    std::vector<Clause> out;
    switch (rel.kind) {
        case RelationKind::Mandatory:
            out.push_back({Lit(a, false), Lit(kids[0], true)});
            out.push_back({Lit(kids[0], false), Lit(a, true)});
            break;
        case RelationKind::Optional:
            out.push_back({Lit(kids[0], false), Lit(a, true)});
            break;
        case RelationKind::Alternative:
        case RelationKind::Or: {
            for (Var k : kids) out.push_back({Lit(k, false), Lit(a, true)});
            if (rel.kind == RelationKind::Alternative) {
                for (std::size_t i = 0; i < kids.size(); ++i)
                    for (std::size_t j = i + 1; j < kids.size(); ++j)
                        out.push_back({Lit(kids[i], false), Lit(kids[j], false)});
            }
            Clause some{Lit(a, false)};
            for (Var k : kids) some.push_back(Lit(k, true));
            out.push_back(std::move(some));
            break;
        }
    }
    return out;
}

std::vector<Clause> cross_tree_clauses(const CrossTreeConstraint& ctc, const VariableTable& vars) {
    const Var a = vars.at(ctc.lhs);
    const Var b = vars.at(ctc.rhs);
    if (ctc.kind == CrossTreeKind::Requires) return {{Lit(a, false), Lit(b, true)}};
    return {{Lit(a, false), Lit(b, false)}};
}

// Negation normal form: Not only on atoms (folded into the atom value),
// no Implies/Iff.
Formula nnf(const Formula& f, bool negate) {
    using Op = Formula::Op;
    switch (f.op) {
        case Op::Atom: return Formula::atom(f.feature, f.value != negate);
        case Op::Not: return nnf(f.args[0], !negate);
        case Op::And:
        case Op::Or: {
            std::vector<Formula> parts;
            for (const auto& a : f.args) parts.push_back(nnf(a, negate));
            const bool as_and = (f.op == Op::And) != negate;
            return as_and ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts));
        }
        case Op::Implies: {
            // a -> b  ==  !a | b
            Formula g = Formula::disjunction({Formula::negation(f.args[0]), f.args[1]});
            return nnf(g, negate);
        }
        case Op::Iff: {
            // a <-> b  ==  (!a | b) & (a | !b);  !(a <-> b)  ==  (a | b) & (!a | !b)
            const Formula& a = f.args[0];
            const Formula& b = f.args[1];
            if (!negate) {
                return Formula::conjunction({nnf(Formula::disjunction({Formula::negation(a), b}), false),
                                             nnf(Formula::disjunction({a, Formula::negation(b)}), false)});
            }
            return Formula::conjunction({nnf(Formula::disjunction({a, b}), false),
                                         nnf(Formula::disjunction({Formula::negation(a), Formula::negation(b)}), false)});
        }
    }
    return {};
}

class Tseitin {
public:
    Tseitin(const VariableTable& vars, Var& next_aux) : vars_(vars), next_aux_(next_aux) {}

    void top(const Formula& f) {
        if (f.op == Formula::Op::And) {
            for (const auto& a : f.args) top(a);
            return;
        }
        out.push_back(clause_of(f));
    }

    std::vector<Clause> out;

private:
    // A clause whose literals imply f: literals stay literals, disjunctions
    // are flattened, anything else is replaced by a defining auxiliary.
    Clause clause_of(const Formula& f) {
        Clause c;
        if (f.op == Formula::Op::Or) {
            for (const auto& a : f.args) c.push_back(lit_for(a));
        } else {
            c.push_back(lit_for(f));
        }
        return c;
    }

    Lit lit_for(const Formula& f) {
        if (f.op == Formula::Op::Atom) return Lit(vars_.at(f.feature), f.value);
        // Positive-polarity definition: aux -> f. Sufficient because f occurs
        // only positively after NNF.
        const Lit aux(next_aux_++, true);
        if (f.op == Formula::Op::And) {
            for (const auto& a : f.args) out.push_back({~aux, lit_for(a)});
        } else {  // Or
            Clause c{~aux};
            for (const auto& a : f.args) c.push_back(lit_for(a));
            out.push_back(std::move(c));
        }
        return aux;
    }

    const VariableTable& vars_;
    Var& next_aux_;
};

}  // namespace

std::vector<Clause> encode_formula(const Formula& f, const VariableTable& vars, Var& next_aux) {
    for (const auto& name : f.features()) vars.at(name);
    if (next_aux < vars.size()) next_aux = static_cast<Var>(vars.size());
    if (f.is_literal_conjunction()) {
        std::vector<Clause> out;
        auto unit = [&](const Formula& l) {
            if (l.op == Formula::Op::Atom) out.push_back({Lit(vars.at(l.feature), l.value)});
            else out.push_back({Lit(vars.at(l.args[0].feature), !l.args[0].value)});
        };
        if (f.op == Formula::Op::And) {
            for (const auto& a : f.args) unit(a);
        } else {
            unit(f);
        }
        return out;
    }
    Tseitin t(vars, next_aux);
    t.top(nnf(f, false));
    return std::move(t.out);
}

ConstraintSet encode(const FeatureModel& model) {
    VariableTable vars(model.features());
    std::vector<LabeledConstraint> out;
    out.push_back({"c0",
                   {{Lit(vars.at(model.root()), true)}},
                   {Provenance::Kind::Root, 0},
                   model.root() + "=t"});
    std::size_t next = 1;
    for (std::size_t i = 0; i < model.relationships().size(); ++i) {
        const auto& rel = model.relationships()[i];
        out.push_back({"c" + std::to_string(next++),
                       relationship_clauses(rel, vars),
                       {Provenance::Kind::Relationship, i},
                       to_display_string(relationship_formula(rel))});
    }
    for (std::size_t i = 0; i < model.cross_tree().size(); ++i) {
        const auto& ctc = model.cross_tree()[i];
        out.push_back({"c" + std::to_string(next++),
                       cross_tree_clauses(ctc, vars),
                       {Provenance::Kind::CrossTree, i},
                       to_display_string(cross_tree_formula(ctc))});
    }
    return ConstraintSet(std::move(out), std::move(vars));
}

std::string write_dimacs(const ConstraintSet& cs) {
    std::size_t total = 0;
    for (const auto& c : cs.constraints()) total += c.clauses.size();
    std::ostringstream out;
    out << "p cnf " << cs.variables().size() << ' ' << total << '\n';
    for (std::size_t v = 0; v < cs.variables().size(); ++v)
        out << "c var " << v + 1 << ' ' << cs.variables().name(static_cast<Var>(v)) << '\n';
    std::size_t first = 1;
    for (const auto& c : cs.constraints()) {
        const std::size_t last = first + c.clauses.size() - 1;
        out << "c label " << c.label << " clauses " << first << ".." << last << " :: " << c.display << '\n';
        for (const auto& cl : c.clauses) {
            for (Lit l : cl) out << l.dimacs() << ' ';
            out << "0\n";
        }
        first = last + 1;
    }
    return out.str();
}

}  // namespace fmdiag
