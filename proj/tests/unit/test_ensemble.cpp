#include "catch_amalgamated.hpp"

#include "factlens/eval_ensemble.hpp"

using namespace factlens;

namespace {

struct Fixture {
    std::shared_ptr<MockProvider> mock = std::make_shared<MockProvider>();
    ClaimRecord claim{"e1", "Ada wrote notes and Ada built engines.", "", true, ""};
    Decomposition d{"e1", {"Ada wrote notes.", "Ada built engines.", "Ada was English."}, "gt", 0};

    Fixture() {
        mock->add("Text: Ada wrote notes and Ada built engines.", "Ada | notes\nAda | engines");
        mock->add("Text: Ada wrote notes.", "Ada | notes");
        mock->add("Text: Ada built engines.", "Ada | engines");
        mock->add("Text: Ada was English.", "Ada | English");
        mock->add("Sub-Claim:", "atomic, high");
    }

    Evaluator evaluator(bool with_judge = true) const {
        EvaluatorSet set;
        set.extractor = std::make_shared<EntityExtractor>(mock, "extractor");
        set.similarity = std::make_shared<TokenF1Similarity>();
        if (with_judge) set.judge = std::make_shared<LlmJudge>(mock, "judge");
        return Evaluator(set);
    }
};

} // namespace

TEST_CASE("routing table per mode") {
    for (MetricKind m : kAllMetrics) CHECK(routed_source(EvaluationMode::Llm, m) == ScoreSource::Llm);
    CHECK(routed_source(EvaluationMode::Ensemble, MetricKind::Atomicity) == ScoreSource::Statistical);
    CHECK(routed_source(EvaluationMode::Ensemble, MetricKind::Coverage) == ScoreSource::Statistical);
    CHECK(routed_source(EvaluationMode::Ensemble, MetricKind::Fabrication) == ScoreSource::Llm);
    CHECK(routed_source(EvaluationMode::Ensemble, MetricKind::Redundancy) == ScoreSource::Llm);
    CHECK_FALSE(routed_source(EvaluationMode::Statistical, MetricKind::Sufficiency).has_value());
    CHECK_FALSE(routed_source(EvaluationMode::Statistical, MetricKind::Readability).has_value());
    CHECK(routed_source(EvaluationMode::Statistical, MetricKind::Redundancy) == ScoreSource::Statistical);
    CHECK(evaluation_mode_from_string("llm") == EvaluationMode::Llm);
    CHECK_FALSE(evaluation_mode_from_string("hybrid").has_value());
}

TEST_CASE("ensemble mode issues 3n+1 judge calls") {
    Fixture f;
    auto r = f.evaluator().evaluate(f.claim, f.d, EvaluationMode::Ensemble);
    const std::size_t n = f.d.size();
    CHECK(f.mock->call_count("judge") == 3 * n + 1);
    CHECK(f.mock->call_count("extractor") == n + 1);
    CHECK(r.metrics.size() == 6);
    CHECK(r.at(MetricKind::Atomicity).source == ScoreSource::Statistical);
    CHECK(r.at(MetricKind::Coverage).source == ScoreSource::Statistical);
    CHECK(r.at(MetricKind::Sufficiency).source == ScoreSource::Llm);
    CHECK(r.at(MetricKind::Redundancy).source == ScoreSource::Llm);
    // Statistical coverage: "english" is new, claim entities are all present.
    CHECK(r.at(MetricKind::Coverage).claim_level == 3);
    CHECK(r.diagnostics.fab == 1);
    CHECK(r.diagnostics.red == 0);
    CHECK(r.subclaim_count == n);
}

TEST_CASE("llm mode issues 4n+2 judge calls and no extraction") {
    Fixture f;
    auto r = f.evaluator().evaluate(f.claim, f.d, EvaluationMode::Llm);
    CHECK(f.mock->call_count("judge") == 4 * f.d.size() + 2);
    CHECK(f.mock->call_count("extractor") == 0);
    for (MetricKind m : kAllMetrics) CHECK(r.at(m).source == ScoreSource::Llm);
}

TEST_CASE("statistical mode makes no judge calls and leaves two metrics absent") {
    Fixture f;
    auto r = f.evaluator(false).evaluate(f.claim, f.d, EvaluationMode::Statistical);
    CHECK(f.mock->call_count("judge") == 0);
    CHECK(r.metrics.size() == 4);
    CHECK_FALSE(r.metrics.count(MetricKind::Sufficiency));
    CHECK_FALSE(r.metrics.count(MetricKind::Readability));
    CHECK(r.at(MetricKind::Fabrication).per_subclaim == std::vector<int>{1, 1, 2});
    CHECK(r.at(MetricKind::Redundancy).claim_level == 1);
}

TEST_CASE("missing evaluators are reported by metric") {
    Fixture f;
    CHECK_THROWS_AS(f.evaluator(false).evaluate(f.claim, f.d, EvaluationMode::Ensemble), EvaluationError);
    Evaluator none{EvaluatorSet{}};
    CHECK_THROWS_AS(none.evaluate(f.claim, f.d, EvaluationMode::Statistical), EvaluationError);
    CHECK_THROWS_AS(f.evaluator().evaluate(f.claim, Decomposition{"e1", {}, "gt", 0}, EvaluationMode::Llm),
                    PreconditionError);
}

TEST_CASE("an extraction failure surfaces as an evaluation error") {
    Fixture f;
    Decomposition d{"e1", {"Unknown text."}, "gt", 0};
    f.mock->add("Text: Unknown text.", "prose");
    CHECK_THROWS_AS(f.evaluator().evaluate(f.claim, d, EvaluationMode::Ensemble), EvaluationError);
}

TEST_CASE("summarize_reports averages claim-level scores and skips absent metrics") {
    EvaluationReport a, b;
    a.metrics[MetricKind::Coverage] = {ScoreSource::Statistical, {}, 3};
    a.metrics[MetricKind::Atomicity] = {ScoreSource::Statistical, {3, 1}, std::nullopt};
    b.metrics[MetricKind::Coverage] = {ScoreSource::Statistical, {}, 2};
    std::vector<EvaluationReport> reports{a, b};
    auto means = summarize_reports(reports);
    CHECK(means.at(MetricKind::Coverage) == 2.5);
    CHECK(means.at(MetricKind::Atomicity) == 2.0);
    CHECK_FALSE(means.count(MetricKind::Sufficiency));
    CHECK_THROWS_AS(summarize_reports(std::vector<EvaluationReport>{}), PreconditionError);
}
