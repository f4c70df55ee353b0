#include "catch_amalgamated.hpp"

#include <set>

#include "factlens/decomposer.hpp"

using namespace factlens;

TEST_CASE("mt19937_64 produces the sequence fixed by the standard") {
    std::mt19937_64 rng;
    CHECK(rng() == 14514284786278117030ULL);
    rng.discard(9998);
    CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("sampling picks three distinct demonstrations deterministically") {
    std::set<std::array<std::size_t, 3>> seen;
    std::array<int, 4> left_out{};
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        auto s = sample_demonstrations(seed);
        CHECK(s == sample_demonstrations(seed));
        std::set<std::size_t> distinct(s.begin(), s.end());
        REQUIRE(distinct.size() == 3);
        for (auto i : s) REQUIRE(i < kDemonstrationCount);
        seen.insert(s);
        for (std::size_t i = 0; i < 4; ++i) {
            if (!distinct.count(i)) ++left_out[i];
        }
    }
    // All 24 ordered choices occur and each demonstration is left out about a quarter of the time.
    CHECK(seen.size() == 24);
    for (int c : left_out) {
        CHECK(c > 400);
        CHECK(c < 600);
    }
}

TEST_CASE("the decomposition prompt carries three demonstrations and the claim") {
    const auto demos = default_demonstrations();
    const auto prompt = build_decomposition_prompt("Paris is the capital of France.", demos, kDefaultSeed);
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = prompt.find("\nSub_Claims: [", pos)) != std::string::npos; ++pos) ++count;
    CHECK(count == 3);
    CHECK(prompt.find("Claim: Paris is the capital of France.\nSub_Claims:") != std::string::npos);
    const auto picked = sample_demonstrations(kDefaultSeed);
    std::size_t prev = 0;
    for (auto i : picked) {
        auto pos = prompt.find(render_demonstration(demos[i]));
        REQUIRE(pos != std::string::npos);
        CHECK(pos >= prev);
        prev = pos;
    }
    CHECK(prompt == build_decomposition_prompt("Paris is the capital of France.", demos, kDefaultSeed));
}

TEST_CASE("demonstration sets need exactly four entries") {
    using Demos = std::vector<Demonstration>;
    CHECK_THROWS_AS(DemonstrationSet(Demos{{"a", {"a"}}}), ConfigError);
    CHECK_THROWS_AS(DemonstrationSet(Demos{{"a", {"a"}}, {"b", {"b"}}, {"c", {"c"}}, {"d", {}}}), ConfigError);
}

TEST_CASE("parse_subclaim_list accepts quoted lists") {
    CHECK(parse_subclaim_list("[\"A is B.\", \"C is D.\"]") == std::vector<std::string>{"A is B.", "C is D."});
    CHECK(parse_subclaim_list("Sub_Claims: ['A is B.', 'C is D.']") ==
          std::vector<std::string>{"A is B.", "C is D."});
    // An apostrophe inside a single-quoted item is kept.
    CHECK(parse_subclaim_list("['Messi won the Ballon d'Or.', 'He is Argentine.']") ==
          std::vector<std::string>{"Messi won the Ballon d'Or.", "He is Argentine."});
    CHECK(parse_subclaim_list("[\"He said \\\"hi\\\".\"]") == std::vector<std::string>{"He said \"hi\"."});
}

TEST_CASE("parse_subclaim_list accepts bulleted and numbered lines") {
    CHECK(parse_subclaim_list("- A is B.\n- C is D.\n") == std::vector<std::string>{"A is B.", "C is D."});
    CHECK(parse_subclaim_list("Here you go:\n1. A is B.\n2) C is D.") == std::vector<std::string>{"A is B.", "C is D."});
    CHECK(parse_subclaim_list("\xE2\x80\xA2 A is B.") == std::vector<std::string>{"A is B."});
    CHECK(parse_subclaim_list("A is B.\nC is D.") == std::vector<std::string>{"A is B.", "C is D."});
}

TEST_CASE("parse_subclaim_list rejects prose and empty lists") {
    CHECK_THROWS_AS(parse_subclaim_list("The claim cannot be decomposed."), ParseError);
    CHECK_THROWS_AS(parse_subclaim_list("[]"), ParseError);
    CHECK_THROWS_AS(parse_subclaim_list(""), ParseError);
}

TEST_CASE("Decomposer returns sub-claims with generator and seed") {
    auto mock = std::make_shared<MockProvider>();
    mock->add("Claim: Oslo is the capital of Norway and lies on a fjord.\nSub_Claims:",
              "[\"Oslo is the capital of Norway.\", \"Oslo lies on a fjord.\"]");
    Decomposer d(mock, "decomposer-model");
    ClaimRecord rec{"x1", "Oslo is the capital of Norway and lies on a fjord.", "", true, ""};
    auto out = d.decompose(rec, 5);
    CHECK(out.claim_id == "x1");
    CHECK(out.generator == "decomposer-model");
    CHECK(out.seed == 5);
    CHECK(out.sub_claims.size() == 2);
    CHECK(mock->call_count("decomposer-model") == 1);
}

TEST_CASE("Decomposer retries once then raises DecompositionError") {
    auto mock = std::make_shared<MockProvider>();
    mock->add_route({{"Claim: Rome\nSub_Claims:"}, {"prose", "prose again"}, std::nullopt});
    mock->add_route({{"Claim: Bern\nSub_Claims:"}, {"prose", "[\"Bern.\"]"}, std::nullopt});
    Decomposer d(mock, "m");
    CHECK_THROWS_AS(d.decompose({"r", "Rome", "", true, ""}, 1), DecompositionError);
    CHECK(mock->call_count() == 2);
    CHECK(d.decompose({"b", "Bern", "", true, ""}, 1).sub_claims == std::vector<std::string>{"Bern."});
    CHECK_THROWS_AS(d.decompose({"e", "  ", "", true, ""}, 1), PreconditionError);
}
