#include "fmdiag/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmdiag/encode.hpp"
#include "fmdiag/error.hpp"
#include "fmdiag/sat.hpp"

namespace fmdiag {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = next();
        if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
    Rng mix(seed);
    std::uint64_t h = mix.next();
    for (auto c : coords) {
        Rng step(h ^ (c * 0xd6e8feb86659fd93ULL));
        h = step.next();
    }
    return h;
}

void SynthParams::validate() const {
    if (num_features() < 1) throw Error("synth: num_constraints must be at least 2");
    auto fraction = [](double x, const char* name) {
        if (!(x >= 0.0 && x <= 1.0)) throw Error(std::string("synth: ") + name + " must be in [0,1]");
    };
    fraction(inconsistency_share, "inconsistency share");
    fraction(ctc_ratio, "ctc ratio");
    fraction(requires_share, "requires share");
    for (double w : {weight_mandatory, weight_optional, weight_alternative, weight_or})
        if (!(w >= 0.0)) throw Error("synth: relationship weights must be non-negative");
    if (weight_mandatory + weight_optional <= 0.0)
        throw Error("synth: mandatory and optional weights cannot both be zero");
    if (max_attempts == 0) throw Error("synth: max_attempts must be positive");
}

std::size_t inducing_count(const SynthParams& p) {
    return static_cast<std::size_t>(std::ceil(p.inconsistency_share * static_cast<double>(p.num_tests) - 1e-9));
}

namespace {

std::string feature_name(std::size_t i) { return "f" + std::to_string(i + 1); }

struct Tree {
    std::vector<Relationship> relationships;
    std::vector<std::size_t> parent;  // per feature index; root points to itself
};

Tree random_tree(std::size_t n, const SynthParams& p, Rng& rng) {
    Tree t;
    t.parent.assign(n, 0);
    std::size_t attached = 1;
    while (attached < n) {
        const std::size_t left = n - attached;
        double wm = p.weight_mandatory, wo = p.weight_optional;
        double wa = left >= 2 ? p.weight_alternative : 0.0;
        double wr = left >= 2 ? p.weight_or : 0.0;
        double x = rng.unit() * (wm + wo + wa + wr);
        RelationKind kind;
        if ((x -= wm) < 0) kind = RelationKind::Mandatory;
        else if ((x -= wo) < 0) kind = RelationKind::Optional;
        else if ((x -= wa) < 0) kind = RelationKind::Alternative;
        else kind = wr > 0 ? RelationKind::Or : RelationKind::Optional;

        const bool group = kind == RelationKind::Alternative || kind == RelationKind::Or;
        const std::size_t size = group ? rng.between(2, std::min<std::size_t>(4, left)) : 1;
        const std::size_t parent = rng.below(attached);
        Relationship rel{kind, feature_name(parent), {}};
        for (std::size_t k = 0; k < size; ++k) {
            t.parent[attached] = parent;
            rel.children.push_back(feature_name(attached++));
        }
        t.relationships.push_back(std::move(rel));
    }
    return t;
}

bool related(const Tree& t, std::size_t a, std::size_t b) {
    for (std::size_t x = b; x != 0; x = t.parent[x])
        if (t.parent[x] == a) return true;
    for (std::size_t x = a; x != 0; x = t.parent[x])
        if (t.parent[x] == b) return true;
    return false;
}

std::vector<Clause> ctc_clauses(CrossTreeKind kind, std::size_t a, std::size_t b) {
    const Var va = static_cast<Var>(a), vb = static_cast<Var>(b);
    if (kind == CrossTreeKind::Requires) return {{Lit(va, false), Lit(vb, true)}};
    return {{Lit(va, false), Lit(vb, false)}};
}

}  // namespace

FeatureModel synth_model(const SynthParams& p) {
    p.validate();
    const std::size_t n = p.num_features();
    const std::size_t target = p.num_constraints;
    Rng rng(derive_seed(p.seed, {0x6d6f64656cULL}));

    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(feature_name(i));

    for (std::size_t attempt = 0; attempt < p.max_attempts; ++attempt) {
        Tree tree = random_tree(n, p, rng);
        if (tree.relationships.size() > target) continue;
        const std::size_t wanted = target - tree.relationships.size();
        if (static_cast<double>(wanted) < p.ctc_ratio * static_cast<double>(target) - 1e-9) continue;

        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && !related(tree, a, b)) pairs.emplace_back(a, b);
        if (wanted > 0 && pairs.empty()) continue;

        // Incrementally add cross-tree constraints, rejecting any that voids the model.
        FeatureModel base = FeatureModel::create(names, names[0], tree.relationships, {});
        ClauseDB db = encode(base).to_clause_db();
        Solver solver;
        if (!solver.solve(db).sat()) continue;
        std::vector<CrossTreeConstraint> ctcs;
        std::size_t budget = 64 * wanted + 256;
        while (ctcs.size() < wanted && budget-- > 0) {
            const auto [a, b] = pairs[rng.below(pairs.size())];
            const CrossTreeKind kind = rng.chance(p.requires_share) ? CrossTreeKind::Requires : CrossTreeKind::Excludes;
            const auto extra = ctc_clauses(kind, a, b);
            if (!solver.solve(db, extra).sat()) continue;
            for (const auto& c : extra) db.add(c);
            ctcs.push_back({kind, names[a], names[b]});
        }
        if (ctcs.size() < wanted) continue;
        return FeatureModel::create(names, names[0], std::move(tree.relationships), std::move(ctcs));
    }
    throw Infeasible("synth: cannot build a non-void model with exactly " + std::to_string(target) +
                     " constraints over " + std::to_string(n) + " features");
}

std::vector<TestCase> synth_tests(const FeatureModel& model, const SynthParams& p) {
    p.validate();
    std::vector<TestCase> out;
    if (p.num_tests == 0) return out;

    const ConstraintSet cs = encode(model);
    const ClauseDB db = cs.to_clause_db();
    Rng rng(derive_seed(p.seed, {0x7465737473ULL}));
    Solver checker;
    if (!checker.solve(db).sat()) throw Error("synth: cannot generate tests for a void model");

    std::vector<std::string> candidates;
    for (const auto& f : model.features())
        if (f != model.root()) candidates.push_back(f);
    if (candidates.empty()) throw ShareUnreachable("synth: model has no non-root features to test");

    auto pick_features = [&](std::size_t count) {
        std::vector<std::size_t> idx(candidates.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        idx.resize(count);
        return idx;
    };
    auto literal_test = [&](const std::vector<std::size_t>& idx, auto value_of) {
        std::vector<Formula> lits;
        for (auto i : idx) lits.push_back(Formula::atom(candidates[i], value_of(i)));
        return Formula::conjunction(std::move(lits));
    };
    auto to_clauses = [&](const Formula& f) {
        Var aux = static_cast<Var>(cs.variables().size());
        return encode_formula(f, cs.variables(), aux);
    };

    const std::size_t inducing = inducing_count(p);
    std::vector<bool> is_inducing(p.num_tests, false);
    for (std::size_t i = 0; i < inducing; ++i) is_inducing[i] = true;
    for (std::size_t i = p.num_tests; i > 1; --i) {
        const std::size_t j = rng.below(i);
        const bool tmp = is_inducing[i - 1];
        is_inducing[i - 1] = is_inducing[j];
        is_inducing[j] = tmp;
    }

    // Single literals inconsistent with CF, found on demand.
    std::optional<std::vector<Formula>> forced;
    auto forced_literals = [&]() -> const std::vector<Formula>& {
        if (!forced) {
            forced.emplace();
            for (const auto& f : candidates) {
                for (bool v : {true, false}) {
                    const std::vector<Clause> unit{{Lit(cs.variables().at(f), v)}};
                    if (!checker.solve(db, unit).sat()) forced->push_back(Formula::atom(f, v));
                }
            }
        }
        return *forced;
    };

    Solver sampler(SolverOptions{derive_seed(p.seed, {0x77697473ULL})});
    const std::size_t max_lits = std::min<std::size_t>(4, candidates.size());
    constexpr std::size_t kInducingAttempts = 200;

    for (std::size_t t = 0; t < p.num_tests; ++t) {
        Formula f;
        if (is_inducing[t]) {
            bool found = false;
            for (std::size_t attempt = 0; attempt < kInducingAttempts && !found; ++attempt) {
                const auto idx = pick_features(rng.between(1, max_lits));
                Formula g = literal_test(idx, [&](std::size_t) { return rng.chance(0.5); });
                if (!checker.solve(db, to_clauses(g)).sat()) {
                    f = std::move(g);
                    found = true;
                }
            }
            if (!found) {
                const auto& pool = forced_literals();
                if (pool.empty())
                    throw ShareUnreachable("synth: model admits no inconsistency-inducing test");
                f = pool[rng.below(pool.size())];
            }
        } else {
            const SatResult r = sampler.solve(db);
            const auto idx = pick_features(rng.between(1, max_lits));
            f = literal_test(idx, [&](std::size_t i) {
                return (*r.witness)[cs.variables().at(candidates[i])];
            });
        }
        out.push_back({"t" + std::to_string(t + 1), std::move(f), Polarity::Positive});
    }
    return out;
}

}  // namespace fmdiag
