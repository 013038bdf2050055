"""Feature-model testing and DirectDebug diagnosis."""

from ._fmdiag import (  # noqa: F401
    AnalysisReport,
    ConstraintSet,
    DebugSession,
    DiagnosisResult,
    FeatureModel,
    FmdiagError,
    Infeasible,
    InvalidConsiderationSet,
    NoDiagnosisPossible,
    ParseError,
    ShareUnreachable,
    TestCase,
    TooLarge,
    analyze,
    cli,
    diagnose,
    encode,
    format_report,
    generate_dead_feature_tests,
    oracle_all_minimal_diagnoses,
    parse_model,
    parse_test_suite,
    preprocess,
    solve,
    synth,
    verify_minimal,
    write_dimacs,
    write_model,
    write_test_suite,
)


def diagnose_files(model_path, tests_path, consider=None, trace=False):
    """Parse a model and a test suite from disk and return (session, result)."""
    with open(model_path, encoding="utf-8") as f:
        model = parse_model(f.read())
    with open(tests_path, encoding="utf-8") as f:
        positives, negatives = parse_test_suite(f.read(), model)
    session = preprocess(encode(model), positives, negatives, consider)
    return session, diagnose(session, trace)
