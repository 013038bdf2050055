#include "fmdiag/sat.hpp"

#include <algorithm>
#include <numeric>

#include "fmdiag/error.hpp"

namespace fmdiag {

ClauseDB::ClauseDB(std::size_t num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
    for (auto& c : clauses) add(std::move(c));
}

void ClauseDB::add(Clause clause) {
    if (clause.empty()) {
        has_empty_ = true;
        return;
    }
    for (Lit l : clause) num_vars_ = std::max<std::size_t>(num_vars_, l.var() + 1);
    clauses_.push_back(std::move(clause));
}

bool satisfies(const std::vector<bool>& assignment, std::span<const Clause* const> clauses) {
    for (const Clause* c : clauses) {
        const bool ok = std::any_of(c->begin(), c->end(), [&](Lit l) {
            return l.var() < assignment.size() && assignment[l.var()] == l.positive();
        });
        if (!ok) return false;
    }
    return true;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::int8_t kUndef = -1;

class Search {
public:
    Search(std::size_t num_vars, std::vector<Var> order, std::vector<bool> first_polarity)
        : values_(num_vars, kUndef),
          watches_(2 * num_vars),
          order_(std::move(order)),
          rank_(num_vars),
          first_polarity_(std::move(first_polarity)) {
        for (std::size_t i = 0; i < order_.size(); ++i) rank_[order_[i]] = i;
    }

    // Returns false when the clause set is already contradictory.
    bool add_clause(const Clause& input) {
        std::vector<Lit> lits(input);
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 1; i < lits.size(); ++i)
            if (lits[i].var() == lits[i - 1].var()) return true;  // tautology
        if (lits.size() == 1) {
            units_.push_back(lits.front());
            return true;
        }
        const auto id = static_cast<std::uint32_t>(clauses_.size());
        watches_[lits[0].code()].push_back(id);
        watches_[lits[1].code()].push_back(id);
        clauses_.push_back(std::move(lits));
        return true;
    }

    bool run() {
        for (Lit u : units_) {
            const int v = value(u);
            if (v == 0) return false;
            if (v == kUndef) assign(u);
        }
        while (true) {
            if (!propagate()) {
                while (!levels_.empty() && levels_.back().flipped) levels_.pop_back();
                if (levels_.empty()) return false;
                Level& lv = levels_.back();
                undo(lv.trail_start);
                lv.flipped = true;
                assign(~lv.decision);
                continue;
            }
            const auto next = pick();
            if (!next) return true;
            const Lit decision(*next, first_polarity_[*next]);
            levels_.push_back({trail_.size(), decision, false});
            assign(decision);
        }
    }

    std::vector<bool> witness() const {
        std::vector<bool> out(values_.size());
        for (std::size_t v = 0; v < values_.size(); ++v) out[v] = values_[v] == 1;
        return out;
    }

private:
    struct Level {
        std::size_t trail_start;
        Lit decision;
        bool flipped;
    };

    int value(Lit l) const {
        const std::int8_t v = values_[l.var()];
        if (v == kUndef) return kUndef;
        return (v == 1) == l.positive() ? 1 : 0;
    }

    void assign(Lit l) {
        values_[l.var()] = l.positive() ? 1 : 0;
        trail_.push_back(l);
    }

    void undo(std::size_t trail_start) {
        for (std::size_t i = trail_start; i < trail_.size(); ++i) {
            const Var v = trail_[i].var();
            values_[v] = kUndef;
            scan_ = std::min(scan_, rank_[v]);
        }
        trail_.resize(trail_start);
        head_ = trail_start;
    }

    std::optional<Var> pick() {
        while (scan_ < order_.size() && values_[order_[scan_]] != kUndef) ++scan_;
        if (scan_ == order_.size()) return std::nullopt;
        return order_[scan_];
    }

    bool propagate() {
        while (head_ < trail_.size()) {
            const Lit falsified = ~trail_[head_++];
            auto& ws = watches_[falsified.code()];
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const std::uint32_t id = ws[i];
                auto& c = clauses_[id];
                if (c[0] == falsified) std::swap(c[0], c[1]);
                if (value(c[0]) == 1) {
                    ws[keep++] = id;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[c[1].code()].push_back(id);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = id;
                if (value(c[0]) == 0) {
                    for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
                    ws.resize(keep);
                    return false;
                }
                assign(c[0]);
            }
            ws.resize(keep);
        }
        return true;
    }

    std::vector<std::int8_t> values_;
    std::vector<std::vector<std::uint32_t>> watches_;
    std::vector<std::vector<Lit>> clauses_;
    std::vector<Lit> units_;
    std::vector<Lit> trail_;
    std::vector<Level> levels_;
    std::vector<Var> order_;
    std::vector<std::size_t> rank_;
    std::vector<bool> first_polarity_;
    std::size_t head_ = 0;
    std::size_t scan_ = 0;
};

}  // namespace

SatResult Solver::solve(const ClauseDB& db, std::span<const Clause> assumptions) {
    if (db.has_empty_clause()) {
        ++calls_;
        return {};
    }
    std::size_t num_vars = db.num_vars();
    std::vector<const Clause*> all;
    all.reserve(db.clauses().size() + assumptions.size());
    for (const auto& c : db.clauses()) all.push_back(&c);
    for (const auto& c : assumptions) {
        all.push_back(&c);
        for (Lit l : c) num_vars = std::max<std::size_t>(num_vars, l.var() + 1);
    }
    return solve(num_vars, all);
}

SatResult Solver::solve(std::size_t num_vars, std::span<const Clause* const> clauses) {
    ++calls_;
    std::vector<Var> order(num_vars);
    std::iota(order.begin(), order.end(), Var{0});
    std::vector<bool> polarity(num_vars, true);
    if (options_.random_seed) {
        if (!random_seeded_) {
            random_state_ = *options_.random_seed;
            random_seeded_ = true;
        }
        for (std::size_t i = num_vars; i > 1; --i) {
            const std::size_t j = splitmix64(random_state_) % i;
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t v = 0; v < num_vars; ++v) polarity[v] = (splitmix64(random_state_) & 1u) != 0;
    }

    Search search(num_vars, std::move(order), std::move(polarity));
    for (const Clause* c : clauses) {
        if (c->empty()) return {};
        for (Lit l : *c)
            if (l.var() >= num_vars) throw InternalError("literal references variable beyond num_vars");
        search.add_clause(*c);
    }
    if (!search.run()) return {};

    SatResult result{SatStatus::Sat, search.witness()};
    if (!satisfies(*result.witness, clauses)) throw InternalError("solver produced a non-satisfying witness");
    return result;
}

}  // namespace fmdiag
