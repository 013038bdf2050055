#include "fmdiag/feature_model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fmdiag/error.hpp"
#include "fmdiag/formula.hpp"

namespace fmdiag {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

std::string_view keyword(RelationKind kind) noexcept {
    switch (kind) {
        case RelationKind::Mandatory: return "mandatory";
        case RelationKind::Optional: return "optional";
        case RelationKind::Alternative: return "alternative";
        case RelationKind::Or: return "or";
    }
    return "";
}

std::string_view keyword(CrossTreeKind kind) noexcept {
    return kind == CrossTreeKind::Requires ? "requires" : "excludes";
}

FeatureModel FeatureModel::create(std::vector<std::string> features, std::string root,
                                  std::vector<Relationship> relationships,
                                  std::vector<CrossTreeConstraint> cross_tree) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!is_valid_feature_name(features[i]))
            throw ModelError("invalid feature name '" + features[i] + "'");
        if (!index.emplace(features[i], i).second)
            throw ModelError("duplicate feature '" + features[i] + "'");
    }
    auto require = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw ModelError("unknown feature '" + name + "'");
        return it->second;
    };
    const std::size_t root_idx = require(root);

    std::vector<std::size_t> parent_rel(features.size(), kNone);
    std::vector<std::size_t> parent_of(features.size(), kNone);
    for (std::size_t r = 0; r < relationships.size(); ++r) {
        const auto& rel = relationships[r];
        const std::size_t p = require(rel.parent);
        const bool single = rel.kind == RelationKind::Mandatory || rel.kind == RelationKind::Optional;
        if (single && rel.children.size() != 1)
            throw ModelError(std::string(keyword(rel.kind)) + " relationship needs exactly one child");
        if (!single && rel.children.size() < 2)
            throw ModelError(std::string(keyword(rel.kind)) + " group under '" + rel.parent +
                             "' needs at least two children");
        for (const auto& child : rel.children) {
            const std::size_t c = require(child);
            if (c == p) throw ModelError("feature '" + child + "' cannot be its own child");
            if (c == root_idx) throw ModelError("root feature '" + child + "' appears as a child");
            if (parent_rel[c] != kNone)
                throw ModelError("feature '" + child + "' is the child of more than one relationship");
            parent_rel[c] = r;
            parent_of[c] = p;
        }
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (i != root_idx && parent_rel[i] == kNone)
            throw ModelError("feature '" + features[i] + "' is not attached to the tree (multiple roots)");
    }
    // Every parent chain must reach the root; anything else is a cycle.
    for (std::size_t i = 0; i < features.size(); ++i) {
        std::size_t cur = i;
        std::size_t steps = 0;
        while (cur != root_idx) {
            cur = parent_of[cur];
            if (++steps > features.size())
                throw ModelError("cycle through feature '" + features[i] + "'");
        }
    }
    for (const auto& ctc : cross_tree) {
        require(ctc.lhs);
        require(ctc.rhs);
        if (ctc.lhs == ctc.rhs)
            throw ModelError(std::string(keyword(ctc.kind)) + " constraint relates '" + ctc.lhs +
                             "' to itself");
    }

    FeatureModel m;
    m.features_ = std::move(features);
    m.root_ = std::move(root);
    m.relationships_ = std::move(relationships);
    m.cross_tree_ = std::move(cross_tree);
    m.parent_rel_ = std::move(parent_rel);
    return m;
}

std::optional<std::size_t> FeatureModel::index_of(std::string_view feature) const {
    auto it = std::find(features_.begin(), features_.end(), feature);
    if (it == features_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - features_.begin());
}

const Relationship* FeatureModel::parent_relationship(std::string_view feature) const {
    auto idx = index_of(feature);
    if (!idx || parent_rel_[*idx] == kNone) return nullptr;
    return &relationships_[parent_rel_[*idx]];
}

bool FeatureModel::is_ancestor(std::string_view ancestor, std::string_view feature) const {
    const Relationship* rel = parent_relationship(feature);
    while (rel != nullptr) {
        if (rel->parent == ancestor) return true;
        rel = parent_relationship(rel->parent);
    }
    return false;
}

// ---------------------------------------------------------------------------

namespace {

struct Word {
    std::string text;
    std::size_t column;
};

std::vector<Word> split_words(std::string_view line) {
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        words.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    return words;
}

struct Located {
    std::size_t line;
    std::size_t column;
};

}  // namespace

FeatureModel parse_model(std::string_view text) {
    std::vector<std::string> features;
    std::unordered_map<std::string, Located> declared;
    std::optional<std::string> root;
    std::size_t root_line = 0;
    std::vector<Relationship> relationships;
    std::vector<Located> rel_at;
    std::vector<CrossTreeConstraint> cross_tree;
    std::vector<Located> ctc_at;
    std::vector<std::pair<Word, std::size_t>> references;  // word, line

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto words = split_words(line);
        if (words.empty()) {
            if (end == text.size()) break;
            continue;
        }

        auto check_name = [&](const Word& w) {
            if (!is_valid_feature_name(w.text))
                throw ParseError(line_no, w.column, "invalid feature name '" + w.text + "'");
        };
        const std::string& kw = words[0].text;
        if (kw == "feature") {
            if (words.size() < 2 || words.size() > 3)
                throw ParseError(line_no, words[0].column, "expected 'feature <name> [root]'");
            check_name(words[1]);
            if (words.size() == 3) {
                if (words[2].text != "root")
                    throw ParseError(line_no, words[2].column, "expected 'root', got '" + words[2].text + "'");
                if (root)
                    throw ParseError(line_no, words[2].column,
                                     "multiple roots: '" + *root + "' already declared root on line " +
                                         std::to_string(root_line));
                root = words[1].text;
                root_line = line_no;
            }
            if (!declared.emplace(words[1].text, Located{line_no, words[1].column}).second)
                throw ParseError(line_no, words[1].column, "duplicate feature '" + words[1].text + "'");
            features.push_back(words[1].text);
        } else if (kw == "mandatory" || kw == "optional" || kw == "alternative" || kw == "or") {
            Relationship rel;
            rel.kind = kw == "mandatory"     ? RelationKind::Mandatory
                       : kw == "optional"    ? RelationKind::Optional
                       : kw == "alternative" ? RelationKind::Alternative
                                             : RelationKind::Or;
            const bool single = rel.kind == RelationKind::Mandatory || rel.kind == RelationKind::Optional;
            if (single && words.size() != 3)
                throw ParseError(line_no, words[0].column, "expected '" + kw + " <parent> <child>'");
            if (!single && words.size() < 4)
                throw ParseError(line_no, words[0].column,
                                 "undersized group: '" + kw + "' needs a parent and at least two children");
            for (std::size_t i = 1; i < words.size(); ++i) {
                check_name(words[i]);
                references.emplace_back(words[i], line_no);
            }
            rel.parent = words[1].text;
            for (std::size_t i = 2; i < words.size(); ++i) rel.children.push_back(words[i].text);
            relationships.push_back(std::move(rel));
            rel_at.push_back({line_no, words[0].column});
        } else if (kw == "requires" || kw == "excludes") {
            if (words.size() != 3)
                throw ParseError(line_no, words[0].column, "expected '" + kw + " <a> <b>'");
            check_name(words[1]);
            check_name(words[2]);
            if (words[1].text == words[2].text)
                throw ParseError(line_no, words[2].column, "'" + kw + "' relates a feature to itself");
            references.emplace_back(words[1], line_no);
            references.emplace_back(words[2], line_no);
            cross_tree.push_back({kw == "requires" ? CrossTreeKind::Requires : CrossTreeKind::Excludes,
                                  words[1].text, words[2].text});
            ctc_at.push_back({line_no, words[0].column});
        } else {
            throw ParseError(line_no, words[0].column, "unknown statement '" + kw + "'");
        }
        if (end == text.size()) break;
    }

    for (const auto& [word, line] : references) {
        if (!declared.count(word.text))
            throw ParseError(line, word.column, "unknown feature '" + word.text + "'");
    }
    if (features.empty()) throw ParseError(line_no, 0, "model declares no features");

    // Tree checks with positions; FeatureModel::create re-validates.
    std::unordered_map<std::string, std::size_t> child_of;
    for (std::size_t r = 0; r < relationships.size(); ++r) {
        const auto& rel = relationships[r];
        std::unordered_set<std::string> in_group;
        for (const auto& child : rel.children) {
            if (child == rel.parent)
                throw ParseError(rel_at[r].line, 0, "feature '" + child + "' cannot be its own child");
            if (!in_group.insert(child).second)
                throw ParseError(rel_at[r].line, 0, "feature '" + child + "' listed twice in one group");
            if (auto it = child_of.find(child); it != child_of.end())
                throw ParseError(rel_at[r].line, 0,
                                 "non-tree child: '" + child + "' is already a child on line " +
                                     std::to_string(rel_at[it->second].line));
            child_of.emplace(child, r);
        }
    }
    if (root) {
        if (auto it = child_of.find(*root); it != child_of.end())
            throw ParseError(rel_at[it->second].line, 0, "root feature '" + *root + "' appears as a child");
    } else {
        std::vector<std::string> candidates;
        for (const auto& f : features)
            if (!child_of.count(f)) candidates.push_back(f);
        if (candidates.size() != 1)
            throw ParseError(0, 0,
                             candidates.empty() ? "no root feature"
                                                : "multiple roots: '" + candidates[0] + "' and '" +
                                                      candidates[1] + "' have no parent");
        root = candidates.front();
    }
    for (const auto& f : features) {
        if (f != *root && !child_of.count(f)) {
            const auto& at = declared.at(f);
            throw ParseError(at.line, at.column,
                             "multiple roots: feature '" + f + "' is not attached to the tree");
        }
    }

    try {
        return FeatureModel::create(std::move(features), std::move(*root), std::move(relationships),
                                    std::move(cross_tree));
    } catch (const ModelError& e) {
        throw ParseError(0, 0, e.what());
    }
}

std::string write_model(const FeatureModel& model) {
    std::ostringstream out;
    for (const auto& f : model.features()) {
        out << "feature " << f;
        if (f == model.root()) out << " root";
        out << '\n';
    }
    for (const auto& rel : model.relationships()) {
        out << keyword(rel.kind) << ' ' << rel.parent;
        for (const auto& c : rel.children) out << ' ' << c;
        out << '\n';
    }
    for (const auto& ctc : model.cross_tree()) out << keyword(ctc.kind) << ' ' << ctc.lhs << ' ' << ctc.rhs << '\n';
    return out.str();
}

}  // namespace fmdiag
