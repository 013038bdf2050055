#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmdiag/encode.hpp"
#include "fmdiag/feature_model.hpp"
#include "fmdiag/test_suite.hpp"

namespace fmdiag {

struct AnalysisReport {
    bool void_model = false;
    std::vector<std::string> dead_features;
    /// Non-mandatory features (optional or group children) that are forced
    /// whenever their parent is selected. Dead features are never listed.
    std::vector<std::string> false_optionals;
    std::uint64_t solver_calls = 0;
};

/// Void, dead-feature and false-optional analysis of `cs` (normally
/// encode(model), possibly with constraints removed). A void model reports
/// empty lists after a single solver call; otherwise exactly
/// 1 + |F| + |non-mandatory features| calls are made.
AnalysisReport analyze(const ConstraintSet& cs, const FeatureModel& model);

enum class TestKind { DeadFeature };

/// One positive test `f=t` per non-root feature, labeled gen_dead_<f>, in
/// model feature order.
std::vector<TestCase> generate_tests(const FeatureModel& model, const std::vector<TestKind>& kinds);

std::string format_analysis(const AnalysisReport& report);

}  // namespace fmdiag
