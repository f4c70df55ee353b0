#include "catch_amalgamated.hpp"

#include "factlens/extraction.hpp"

using namespace factlens;

TEST_CASE("normalize_entity canonicalizes case, spacing, punctuation and articles") {
    CHECK(normalize_entity("  The  Eiffel   Tower. ") == "eiffel tower");
    CHECK(normalize_entity("\"Nirvana\"") == "nirvana");
    CHECK(normalize_entity("An apple") == "apple");
    CHECK(normalize_entity("a") == "a");
    CHECK(normalize_entity("the the band") == "band");
    CHECK(normalize_entity("(The Beatles)") == "beatles");
    CHECK(normalize_entity("Theodore") == "theodore");
    CHECK(normalize_entity("...") == "");
}

TEST_CASE("normalize_entity is idempotent") {
    for (const char* s : {" The Who ", "a  Tale of Two Cities!", "'An' Island", "Mount   Everest", "\t(the) end.",
                          "Kurt Cobain", "U.S.", "the a an thing"}) {
        const auto once = normalize_entity(s);
        CHECK(normalize_entity(once) == once);
    }
}

TEST_CASE("parse_pair_lines reads one pair per line") {
    auto pairs = parse_pair_lines("Kurt Cobain | Nirvana\n- Nirvana | grunge\n2. (Seattle | Washington)\n\n");
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].subject == "Kurt Cobain");
    CHECK(pairs[0].object == "Nirvana");
    CHECK(pairs[1].subject == "Nirvana");
    CHECK(pairs[2].subject == "Seattle");
    CHECK(pairs[2].object == "Washington");
}

TEST_CASE("parse_pair_lines accepts NONE and rejects prose") {
    CHECK(parse_pair_lines("NONE").empty());
    CHECK(parse_pair_lines("none\n").empty());
    CHECK_THROWS_AS(parse_pair_lines("I could not find any entities."), ParseError);
    CHECK_THROWS_AS(parse_pair_lines(""), ParseError);
}

TEST_CASE("pairs with an empty side keep the other side") {
    auto ann = annotation_from_pairs(parse_pair_lines("Denman |\n| Ireland"));
    CHECK(ann.subjects == std::vector<std::string>{"denman"});
    CHECK(ann.objects == std::vector<std::string>{"ireland"});
}

TEST_CASE("annotation_from_pairs normalizes and deduplicates in order") {
    auto ann = annotation_from_pairs({{"The Danube", "Black Sea"}, {"Danube", "ten countries"}, {"danube", "the Black Sea"}});
    CHECK(ann.subjects == std::vector<std::string>{"danube"});
    CHECK(ann.objects == std::vector<std::string>{"black sea", "ten countries"});
}

TEST_CASE("EntityExtractor retries once on an unparseable answer") {
    auto mock = std::make_shared<MockProvider>();
    mock->add_route({{"Text: Paris is in France."}, {"no idea", "Paris | France"}, std::nullopt});
    EntityExtractor ex(mock, "extractor");
    auto ann = ex.extract_pairs("Paris is in France.");
    CHECK(ann.subjects == std::vector<std::string>{"paris"});
    CHECK(ann.objects == std::vector<std::string>{"france"});
    CHECK(mock->call_count() == 2);
}

TEST_CASE("EntityExtractor reports the raw answer after a second failure") {
    auto mock = std::make_shared<MockProvider>();
    mock->add("Text: Oslo", "still prose");
    EntityExtractor ex(mock, "extractor");
    try {
        ex.extract_pairs("Oslo is cold.");
        FAIL("expected ExtractionError");
    } catch (const ExtractionError& e) {
        CHECK(e.raw_response() == "still prose");
        CHECK(std::string(e.what()).find("Oslo is cold.") != std::string::npos);
    }
    CHECK(mock->call_count() == 2);
    CHECK_THROWS_AS(ex.extract_pairs("   "), PreconditionError);
}

TEST_CASE("extraction prompt embeds the text") {
    auto mock = std::make_shared<MockProvider>();
    EntityExtractor ex(mock, "extractor");
    const auto prompt = ex.build_prompt("Ada Lovelace wrote notes.");
    CHECK(prompt.find("Text: Ada Lovelace wrote notes.\n") != std::string::npos);
    CHECK(prompt.find("{text}") == std::string::npos);
}
