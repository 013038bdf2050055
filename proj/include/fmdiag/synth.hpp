#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "fmdiag/feature_model.hpp"
#include "fmdiag/test_suite.hpp"

namespace fmdiag {

/// Small deterministic generator (splitmix64). Output is identical on every
/// platform, which std distributions do not guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, n); n > 0.
    std::size_t below(std::size_t n);
    /// Uniform in [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    /// Uniform in [0, 1).
    double unit();
    bool chance(double p) { return unit() < p; }

private:
    std::uint64_t state_;
};

/// Mixes a base seed with a sequence of coordinates into a new seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords);

struct SynthParams {
    /// |CF| without c0. The model gets num_constraints / 2 features.
    std::size_t num_constraints = 10;
    std::uint64_t seed = 1;
    std::size_t num_tests = 0;
    /// Exact fraction (rounded up) of tests that are inconsistent with CF.
    double inconsistency_share = 0.30;
    /// Minimum fraction of constraints that are cross-tree constraints.
    double ctc_ratio = 0.2;

    // Relationship-kind weights for the random tree.
    double weight_mandatory = 0.25;
    double weight_optional = 0.35;
    double weight_alternative = 0.20;
    double weight_or = 0.20;
    /// Probability that a cross-tree constraint is `requires` (else `excludes`).
    double requires_share = 0.5;

    std::size_t max_attempts = 64;

    std::size_t num_features() const noexcept { return num_constraints / 2; }
    /// Throws Error when a field is out of range.
    void validate() const;
};

/// Random non-void feature model with features f1..fn (root f1) whose
/// encoding has exactly num_constraints constraints besides c0. Fully
/// determined by the parameters. Throws Infeasible when the count cannot be
/// met within max_attempts tree samples.
FeatureModel synth_model(const SynthParams& p);

/// num_tests positive tests of 1-4 literals over non-root features, of which
/// ceil(share * num_tests) are inconsistent with encode(model) and the rest
/// consistent. Labels t1..tM; inducing tests are placed at random positions.
/// Throws ShareUnreachable if no inconsistency-inducing test can be found.
std::vector<TestCase> synth_tests(const FeatureModel& model, const SynthParams& p);

/// Number of inconsistency-inducing tests synth_tests produces.
std::size_t inducing_count(const SynthParams& p);

}  // namespace fmdiag
