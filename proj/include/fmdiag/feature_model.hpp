#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmdiag {

enum class RelationKind { Mandatory, Optional, Alternative, Or };
enum class CrossTreeKind { Requires, Excludes };

std::string_view keyword(RelationKind kind) noexcept;
std::string_view keyword(CrossTreeKind kind) noexcept;

struct Relationship {
    RelationKind kind = RelationKind::Mandatory;
    std::string parent;
    std::vector<std::string> children;

    friend bool operator==(const Relationship&, const Relationship&) = default;
};

struct CrossTreeConstraint {
    CrossTreeKind kind = CrossTreeKind::Requires;
    std::string lhs;
    std::string rhs;

    friend bool operator==(const CrossTreeConstraint&, const CrossTreeConstraint&) = default;
};

/// A basic feature model: a rooted feature tree plus requires/excludes
/// constraints. Instances built through `create` or `parse_model` always
/// satisfy the tree invariants; the value is immutable afterwards.
class FeatureModel {
public:
    FeatureModel() = default;

    /// Validates and builds. Throws ModelError naming the violated invariant.
    static FeatureModel create(std::vector<std::string> features, std::string root,
                               std::vector<Relationship> relationships,
                               std::vector<CrossTreeConstraint> cross_tree);

    const std::vector<std::string>& features() const noexcept { return features_; }
    const std::string& root() const noexcept { return root_; }
    const std::vector<Relationship>& relationships() const noexcept { return relationships_; }
    const std::vector<CrossTreeConstraint>& cross_tree() const noexcept { return cross_tree_; }

    std::optional<std::size_t> index_of(std::string_view feature) const;

    /// The relationship that has `feature` as a child; nullptr for the root.
    const Relationship* parent_relationship(std::string_view feature) const;

    /// True iff `ancestor` lies on the path from the root to `feature`
    /// (a feature is not its own ancestor).
    bool is_ancestor(std::string_view ancestor, std::string_view feature) const;

    friend bool operator==(const FeatureModel&, const FeatureModel&) = default;

private:
    std::vector<std::string> features_;
    std::string root_;
    std::vector<Relationship> relationships_;
    std::vector<CrossTreeConstraint> cross_tree_;
    std::vector<std::size_t> parent_rel_;  // per feature; npos for the root
};

/// Parses the line-oriented `.fm` format:
///
///     feature <name> [root]
///     mandatory <parent> <child>
///     optional <parent> <child>
///     alternative <parent> <child1> <child2> [...]
///     or <parent> <child1> <child2> [...]
///     requires <a> <b>
///     excludes <a> <b>
///
/// `#` starts a comment. Every feature must be declared with `feature`. When
/// no feature carries the `root` marker, the root is the single declared
/// feature that is nobody's child. Throws ParseError (with position) for any
/// malformed or invariant-violating input.
FeatureModel parse_model(std::string_view text);

/// Inverse of parse_model: features first (root marked), then relationships,
/// then cross-tree constraints.
std::string write_model(const FeatureModel& model);

}  // namespace fmdiag
