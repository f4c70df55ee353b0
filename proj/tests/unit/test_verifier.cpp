#include "catch_amalgamated.hpp"

#include "factlens/verifier.hpp"

using namespace factlens;

TEST_CASE("parse_verdict takes the earliest true or false") {
    CHECK(parse_verdict("True"));
    CHECK_FALSE(parse_verdict("FALSE."));
    CHECK(parse_verdict("true, not false"));
    CHECK_FALSE(parse_verdict("The claim is false; it is not true."));
    CHECK_THROWS_AS(parse_verdict("unclear"), ParseError);
}

TEST_CASE("aggregation is false iff any label is false, for all vectors up to length 4") {
    std::size_t vectors = 0;
    for (std::size_t len = 1; len <= 4; ++len) {
        for (unsigned mask = 0; mask < (1u << len); ++mask) {
            std::vector<bool> labels(len);
            bool any_false = false;
            for (std::size_t i = 0; i < len; ++i) {
                labels[i] = (mask >> i) & 1u;
                any_false = any_false || !labels[i];
            }
            CHECK(aggregate_labels(labels) == !any_false);
            ++vectors;
        }
    }
    CHECK(vectors == 30);
    CHECK_THROWS_AS(aggregate_labels(std::vector<bool>{}), PreconditionError);
}

TEST_CASE("fine-grained verification labels every sub-claim") {
    auto mock = std::make_shared<MockProvider>();
    mock->add("Claim: Oslo is in Norway.\nVerdict:", "True");
    mock->add("Claim: Oslo is in Sweden.\nVerdict:", "False");
    mock->add("Claim: Oslo is in Norway and Sweden.\nVerdict:", "True");
    Verifier v(mock, "verifier");
    ClaimRecord claim{"v1", "Oslo is in Norway and Sweden.", "Oslo is the capital of Norway.", false, ""};
    auto out = v.verify_fine_grained(claim, {"v1", {"Oslo is in Norway.", "Oslo is in Sweden."}, "gt", 0});
    CHECK(out.subclaim_labels == std::vector<bool>{true, false});
    CHECK_FALSE(out.aggregated_label);
    CHECK(v.verify_holistic(claim));
    CHECK(mock->call_count("verifier") == 3);
}

TEST_CASE("verification prompt embeds evidence and claim") {
    Verifier v(std::make_shared<MockProvider>(), "m");
    const auto p = v.build_prompt("C.", "E.");
    CHECK(p.find("Evidence: E.") != std::string::npos);
    CHECK(p.find("Claim: C.\n") != std::string::npos);
}

TEST_CASE("verification errors") {
    auto mock = std::make_shared<MockProvider>();
    mock->add("Claim: vague\nVerdict:", "maybe");
    Verifier v(mock, "verifier");
    CHECK_THROWS_AS(v.verify_subclaim("vague", "some evidence"), VerificationError);
    CHECK(mock->call_count() == 2);
    CHECK_THROWS_AS(v.verify_subclaim("x", "  "), PreconditionError);
    CHECK_THROWS_AS(v.verify_fine_grained({"v", "x", "e", true, ""}, {"v", {}, "gt", 0}), PreconditionError);
}
