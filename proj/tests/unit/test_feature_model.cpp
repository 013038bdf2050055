#include <gtest/gtest.h>

#include <random>

#include "fmdiag/error.hpp"
#include "fmdiag/feature_model.hpp"
#include "fmdiag/synth.hpp"
#include "fmdiag/test_suite.hpp"
#include "test_data.hpp"

using namespace fmdiag;

TEST(ParseModel, SurveyModel) {
    const FeatureModel m = parse_model(testdata::read_data("survey.fm"));
    const std::vector<std::string> features{"survey", "payment",    "license",        "nolicense",   "ABtesting",
                                            "statistics", "Q&A", "multiplechoice", "singlechoice"};
    EXPECT_EQ(m.features(), features);
    EXPECT_EQ(m.root(), "survey");
    // c1..c6 are tree relationships, c7 and c8 cross-tree constraints.
    ASSERT_EQ(m.relationships().size(), 6u);
    ASSERT_EQ(m.cross_tree().size(), 2u);
    EXPECT_EQ(m.relationships()[4].kind, RelationKind::Or);
    EXPECT_EQ(m.relationships()[5].kind, RelationKind::Alternative);
    EXPECT_EQ(m.cross_tree()[0].kind, CrossTreeKind::Excludes);
    EXPECT_EQ(m.cross_tree()[1].kind, CrossTreeKind::Requires);
    EXPECT_TRUE(m.is_ancestor("survey", "license"));
    EXPECT_TRUE(m.is_ancestor("payment", "license"));
    EXPECT_FALSE(m.is_ancestor("license", "payment"));
    EXPECT_FALSE(m.is_ancestor("ABtesting", "nolicense"));
}

TEST(ParseModel, SingleFeature) {
    const FeatureModel m = parse_model("feature root\n");
    EXPECT_EQ(m.features().size(), 1u);
    EXPECT_EQ(m.root(), "root");
    EXPECT_TRUE(m.relationships().empty());
    const FeatureModel marked = parse_model("feature solo root");
    EXPECT_EQ(marked.root(), "solo");
}

TEST(ParseModel, ImplicitRootWhenUnmarked) {
    const FeatureModel m = parse_model("feature a\nfeature b\noptional a b\n");
    EXPECT_EQ(m.root(), "a");
}

namespace {

ParseError parse_error(const std::string& text) {
    try {
        parse_model(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
    return ParseError(0, 0, "");
}

}  // namespace

TEST(ParseModel, NonTreeChild) {
    const auto e = parse_error("feature r root\nfeature a\nfeature b\nfeature c\n"
                               "mandatory r a\nmandatory a b\noptional r c\noptional c b\n");
    EXPECT_EQ(e.line(), 8u);
    EXPECT_NE(e.message().find("non-tree child"), std::string::npos);
}

TEST(ParseModel, Errors) {
    EXPECT_EQ(parse_error("feature a root\nfeature a\n").line(), 2u);
    EXPECT_NE(parse_error("feature a root\nfeature b root\n").message().find("multiple roots"), std::string::npos);
    EXPECT_NE(parse_error("feature a\nfeature b\n").message().find("multiple roots"), std::string::npos);
    const auto unknown = parse_error("feature a root\nmandatory a ghost\n");
    EXPECT_EQ(unknown.line(), 2u);
    EXPECT_EQ(unknown.column(), 13u);
    EXPECT_NE(parse_error("feature a root\nfeature b\nalternative a b\n").message().find("undersized"),
              std::string::npos);
    EXPECT_NE(parse_error("feature a root\nfeature b\nor a b\n").message().find("undersized"), std::string::npos);
    EXPECT_EQ(parse_error("feature a root\nfrobnicate a\n").line(), 2u);
    EXPECT_EQ(parse_error("feature 9a root\n").column(), 9u);
    EXPECT_NE(parse_error("feature a root\nfeature b\nmandatory a b\nrequires b b\n").message().find("itself"),
              std::string::npos);
    EXPECT_NE(parse_error("feature a root\nfeature b\nmandatory b a\n").message().find("root"), std::string::npos);
    EXPECT_NE(parse_error("feature r root\nfeature a\nfeature b\nmandatory a b\nmandatory b a\n").message().find("cycle"),
              std::string::npos);
    EXPECT_NE(parse_error("").message().find("no features"), std::string::npos);
    EXPECT_NE(parse_error("feature a root\nfeature b\nfeature c\nmandatory a b\n").message().find("not attached"),
              std::string::npos);
}

TEST(ParseModel, CommentsAndBlankLines) {
    const FeatureModel m = parse_model("# header\n\n  feature r root   # trailing\n\r\nfeature x\r\noptional r x\n");
    EXPECT_EQ(m.features().size(), 2u);
    EXPECT_EQ(m.relationships().size(), 1u);
}

TEST(ModelProperty, WriteThenParseRoundTrips) {
    const FeatureModel survey = parse_model(testdata::read_data("survey.fm"));
    EXPECT_EQ(parse_model(write_model(survey)), survey);
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        SynthParams p;
        p.num_constraints = 6 + seed % 40;
        p.seed = seed;
        const FeatureModel m = synth_model(p);
        EXPECT_EQ(parse_model(write_model(m)), m) << "seed " << seed;
    }
}

TEST(ModelProperty, ParsingIsStable) {
    const std::string text = testdata::read_data("survey.fm");
    EXPECT_EQ(parse_model(text), parse_model(text));
}

TEST(ModelProperty, ArbitraryInputNeverCrashes) {
    std::mt19937 rng(7);
    const std::vector<std::string> words{"feature", "root", "mandatory", "optional", "alternative", "or",
                                         "requires", "excludes", "a", "b", "c", "Q&A", "#", "\n", "\n", "??"};
    for (int i = 0; i < 3000; ++i) {
        std::string s;
        const int len = static_cast<int>(rng() % 30);
        for (int k = 0; k < len; ++k) s += words[rng() % words.size()] + (rng() % 3 ? " " : "");
        if (rng() % 4 == 0) s.push_back(static_cast<char>(rng() % 256));
        try {
            const FeatureModel m = parse_model(s);
            EXPECT_FALSE(m.features().empty());
        } catch (const ParseError&) {
        }
    }
}

// ---------------------------------------------------------------------------

TEST(ParseTestSuite, SurveySuite) {
    const TestSuite s = parse_test_suite(testdata::read_data("paper.tc"));
    ASSERT_EQ(s.positives.size(), 4u);
    EXPECT_TRUE(s.negatives.empty());
    EXPECT_EQ(s.positives[0].label, "t1");
    EXPECT_EQ(s.positives[3].label, "t4");
    EXPECT_EQ(s.positives[0].formula, Formula::atom("nolicense", true));
    EXPECT_EQ(s.positives[1].formula,
              Formula::conjunction({Formula::atom("license", true), Formula::atom("statistics", false)}));
    EXPECT_EQ(s.positives[2].formula, Formula::atom("payment", false));
    EXPECT_EQ(s.positives[3].formula, Formula::atom("singlechoice", false));
}

TEST(ParseTestSuite, GeneralConstraint) {
    const TestSuite s = parse_test_suite("positive ABtesting=t & license=t -> statistics=t\n");
    ASSERT_EQ(s.positives.size(), 1u);
    EXPECT_EQ(s.positives[0].formula.op, Formula::Op::Implies);
    EXPECT_EQ(s.positives[0].formula.args[0].op, Formula::Op::And);
}

TEST(ParseTestSuite, EmptyFile) {
    const TestSuite s = parse_test_suite("");
    EXPECT_TRUE(s.positives.empty());
    EXPECT_TRUE(s.negatives.empty());
}

TEST(ParseTestSuite, NegativesContinueNumbering) {
    const TestSuite s = parse_test_suite("negative a\npositive b\n# c\npositive c=f\nnegative d\n");
    ASSERT_EQ(s.positives.size(), 2u);
    ASSERT_EQ(s.negatives.size(), 2u);
    EXPECT_EQ(s.positives[0].label, "t1");
    EXPECT_EQ(s.positives[1].label, "t2");
    EXPECT_EQ(s.negatives[0].label, "t3");
    EXPECT_EQ(s.negatives[0].formula, Formula::atom("a"));
    EXPECT_EQ(s.negatives[1].label, "t4");
    EXPECT_EQ(s.negatives[1].polarity, Polarity::Negative);
}

TEST(ParseTestSuite, UnknownFeatureWithModel) {
    const FeatureModel m = parse_model(testdata::read_data("survey.fm"));
    EXPECT_NO_THROW(parse_test_suite(testdata::read_data("paper.tc"), &m));
    try {
        parse_test_suite("positive payment=t\npositive  ghost=t\n", &m);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 11u);
    }
    EXPECT_NO_THROW(parse_test_suite("positive ghost=t\n"));
}

TEST(ParseTestSuite, SyntaxErrors) {
    EXPECT_THROW(parse_test_suite("maybe a\n"), ParseError);
    EXPECT_THROW(parse_test_suite("positive\n"), ParseError);
    try {
        parse_test_suite("positive a\npositive a &\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(ParseTestSuite, WriteRoundTrips) {
    const TestSuite s = parse_test_suite("positive a & (b | !c)\nnegative x <-> y\n");
    const TestSuite again = parse_test_suite(write_test_suite(s.positives, s.negatives));
    EXPECT_EQ(again.positives, s.positives);
    EXPECT_EQ(again.negatives, s.negatives);
}
