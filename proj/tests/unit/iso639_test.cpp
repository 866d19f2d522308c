#include "doctest.h"

#include "iso639.hpp"

using namespace feedpipe;

TEST_CASE("mapping examples") {
    CHECK(get_languages(std::string("en-US")) == std::vector<std::string>{"eng"});
    CHECK(get_languages(std::string("de")) == std::vector<std::string>{"deu"});
    CHECK(get_languages(std::string("pt-BR")) == std::vector<std::string>{"por"});
    CHECK(get_languages(std::string("fr")) == std::vector<std::string>{"fra"});
    CHECK(get_languages(std::string("EN")) == std::vector<std::string>{"eng"});
    CHECK(get_languages(std::string("en_US")) == std::vector<std::string>{"eng"});
}

TEST_CASE("absent and unknown tags map to empty") {
    CHECK(get_languages(std::nullopt).empty());
    CHECK(get_languages(std::string("")).empty());
    CHECK(get_languages(std::string("xx")).empty());
    CHECK(get_languages(std::string("x-klingon")).empty());
    CHECK(get_languages(std::string("q1")).empty());
}

TEST_CASE("three-letter subtags pass through only when known") {
    CHECK(get_languages(std::string("eng")) == std::vector<std::string>{"eng"});
    CHECK(get_languages(std::string("deu-CH")) == std::vector<std::string>{"deu"});
    CHECK(get_languages(std::string("zzz")).empty());
}

TEST_CASE("table covers the full two-letter code set") {
    const auto& table = iso639_1_to_3();
    CHECK(table.size() == 184);
    for (const auto& [two, three] : table) {
        CHECK(two.size() == 2);
        CHECK(three.size() == 3);
    }
    // Spot-checks across the alphabet, including irregular mappings.
    CHECK(table.at("bh") == "bih");
    CHECK(table.at("kw") == "cor");
    CHECK(table.at("rw") == "kin");
    CHECK(table.at("se") == "sme");
    CHECK(table.at("zu") == "zul");
    CHECK(table.at("aa") == "aar");
}

TEST_CASE("version stamp names the table") {
    CHECK(std::string(kLanguageTableVersion).find("184") != std::string::npos);
}
