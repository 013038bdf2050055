#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fmdiag {

using Var = std::uint32_t;

/// A literal over a 0-based variable index, packed as 2*var + negated.
class Lit {
public:
    constexpr Lit() = default;
    constexpr Lit(Var var, bool positive) : code_(2 * var + (positive ? 0u : 1u)) {}

    static constexpr Lit from_code(std::uint32_t code) {
        Lit l;
        l.code_ = code;
        return l;
    }

    constexpr Var var() const noexcept { return code_ >> 1; }
    constexpr bool positive() const noexcept { return (code_ & 1u) == 0; }
    constexpr std::uint32_t code() const noexcept { return code_; }
    constexpr Lit operator~() const noexcept { return from_code(code_ ^ 1u); }

    /// DIMACS form: 1-based, sign encodes polarity.
    constexpr std::int64_t dimacs() const noexcept {
        const auto v = static_cast<std::int64_t>(var()) + 1;
        return positive() ? v : -v;
    }

    friend constexpr auto operator<=>(Lit, Lit) = default;

private:
    std::uint32_t code_ = 0;
};

using Clause = std::vector<Lit>;

/// A clause database. An empty input clause is not stored; it only marks the
/// database as trivially unsatisfiable.
class ClauseDB {
public:
    ClauseDB() = default;
    explicit ClauseDB(std::size_t num_vars) : num_vars_(num_vars) {}
    ClauseDB(std::size_t num_vars, std::vector<Clause> clauses);

    void add(Clause clause);

    std::size_t num_vars() const noexcept { return num_vars_; }
    const std::vector<Clause>& clauses() const noexcept { return clauses_; }
    bool has_empty_clause() const noexcept { return has_empty_; }

private:
    std::size_t num_vars_ = 0;
    std::vector<Clause> clauses_;
    bool has_empty_ = false;
};

enum class SatStatus { Sat, Unsat };

struct SatResult {
    SatStatus status = SatStatus::Unsat;
    /// Total assignment over every variable; present iff Sat.
    std::optional<std::vector<bool>> witness;

    bool sat() const noexcept { return status == SatStatus::Sat; }
};

struct SolverOptions {
    /// When set, branching picks a random unassigned variable and polarity
    /// from this seed instead of the fixed lowest-index/positive-first rule.
    std::optional<std::uint64_t> random_seed;
};

/// DPLL search with two-watched-literal unit propagation and chronological
/// backtracking. Complete; no learning. Each call is independent.
///
/// Not thread-safe; use one Solver per thread.
class Solver {
public:
    Solver() = default;
    explicit Solver(SolverOptions options) : options_(options) {}

    /// Decides `db` conjoined with the assumption clauses.
    SatResult solve(const ClauseDB& db, std::span<const Clause> assumptions = {});

    /// Decides the conjunction of the pointed-to clauses over `num_vars`
    /// variables. Every literal must reference a variable below `num_vars`.
    SatResult solve(std::size_t num_vars, std::span<const Clause* const> clauses);

    /// Number of solve() calls since construction or the last reset.
    std::uint64_t count_calls() const noexcept { return calls_; }
    void reset_calls() noexcept { calls_ = 0; }

private:
    SolverOptions options_;
    std::uint64_t calls_ = 0;
    std::uint64_t random_state_ = 0;
    bool random_seeded_ = false;
};

/// True iff `assignment` satisfies every clause.
bool satisfies(const std::vector<bool>& assignment, std::span<const Clause* const> clauses);

}  // namespace fmdiag
