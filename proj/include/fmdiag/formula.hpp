#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fmdiag {

/// Propositional expression over feature literals (`name=t` / `name=f`).
///
/// And/Or nodes are n-ary; Not has one argument; Implies and Iff have two.
/// Atoms carry the feature name and the value the literal asserts.
struct Formula {
    enum class Op { Atom, Not, And, Or, Implies, Iff };

    Op op = Op::Atom;
    std::string feature;  // Atom only
    bool value = true;    // Atom only
    std::vector<Formula> args;

    static Formula atom(std::string feature, bool value = true);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula iff(Formula lhs, Formula rhs);

    bool is_literal() const noexcept;
    /// True for a literal or an And whose arguments are all literals.
    bool is_literal_conjunction() const noexcept;

    /// Evaluates under `lookup`, which returns the truth value of a feature.
    bool evaluate(const std::function<bool(const std::string&)>& lookup) const;

    /// Every feature name referenced, in first-occurrence order, deduplicated.
    std::vector<std::string> features() const;

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// Parses the test-case expression language. Precedence from loosest to
/// tightest: `<->`, `->`, `|`, `&`, `!`. `->` associates to the right.
/// A bare `name` is sugar for `name=t`.
///
/// `&` inside an identifier (as in `Q&A`) binds to the identifier when it is
/// immediately followed by an identifier character; write `a & b` with spaces
/// for a conjunction of two features.
///
/// Throws ParseError with line `line` and a 1-based column within `text`.
Formula parse_formula(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0);

/// Renders with the minimal parentheses needed to reparse to an equal tree.
std::string to_string(const Formula& f);

/// Renders with atoms shown as bare names where positive (`a -> !b`).
std::string to_display_string(const Formula& f);

bool is_identifier_start(char c) noexcept;
bool is_identifier_char(char c) noexcept;
bool is_valid_feature_name(std::string_view name) noexcept;

}  // namespace fmdiag
