#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmdiag {

/// One diagnosis run of one grid cell.
struct BenchSample {
    std::size_t t_pi = 0;
    std::size_t cf = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double diagnosis_ms = 0.0;
    std::uint64_t solver_calls = 0;
    std::uint64_t nodes = 0;
    std::size_t delta_size = 0;

    friend bool operator==(const BenchSample&, const BenchSample&) = default;
};

struct BenchCell {
    std::size_t t_pi = 0;
    std::size_t cf = 0;
    std::vector<BenchSample> samples;
    /// Set when synthesis or diagnosis failed; the cell then has no samples.
    std::optional<std::string> error;

    double mean_ms() const;
};

struct BenchConfig {
    std::vector<std::size_t> rows{5, 10, 25, 50, 100, 250, 500};     // |T_pi|
    std::vector<std::size_t> cols{10, 20, 50, 100, 500, 1000};       // |CF|
    std::size_t reps = 3;
    std::uint64_t seed = 42;
    double inconsistency_share = 0.30;
    std::size_t jobs = 1;
};

struct BenchReport {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::size_t reps = 0;
    /// Row-major: cells[r * cols.size() + c].
    std::vector<BenchCell> cells;
    std::string environment;

    const BenchCell& cell(std::size_t t_pi, std::size_t cf) const;

    /// Header `t_pi,cf,rep,seed,diagnosis_ms,solver_calls,nodes,delta_size`,
    /// one row per sample. Times are written with round-trip precision.
    std::string to_csv() const;
    static BenchReport from_csv(std::string_view csv);

    /// Mean times laid out with |T_pi| rows and |CF| columns.
    std::string to_table() const;
};

/// Seed of repetition `rep` of cell (t_pi, cf).
std::uint64_t cell_seed(std::uint64_t seed, std::size_t t_pi, std::size_t cf, std::size_t rep);

/// Synthesizes a model and test suite per cell and repetition, then times
/// preprocess + DirectDebug + complement with C = CF − {c0}. Synthesis is not
/// timed. Each result is validated after timing.
BenchReport run_bench(const BenchConfig& config);

/// Checks that the largest row is not faster than the smallest row in every
/// column and likewise for columns, allowing `slack`× noise. Returns a
/// description of every violation.
std::vector<std::string> monotone_growth_violations(const BenchReport& report, double slack = 2.0);

}  // namespace fmdiag
