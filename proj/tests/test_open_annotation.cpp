#include "semtag/error.hpp"
#include "semtag/open_annotation.hpp"

#include <doctest.h>
#include <json.hpp>

#include <random>

using namespace semtag;

namespace {

oa::Document sample(std::size_t accepted, std::size_t rejected) {
    oa::Document d;
    d.uri = "http://localhost:8080/annotations/7f0c";
    d.map_uri = "http://localhost:8080/maps/waldseemuller";
    d.shape = {{10.5, 20}, {300, 20}, {300, 240.25}, {10.5, 240.25}};
    d.text = "The Strait of Gibraltar \"Pillars\"\nsecond line";
    d.creator = {"u1", "Ann Example"};
    d.created_at = "2012-10-01T09:00:00Z";
    d.condition = Condition::SMT_CTX;
    for (std::size_t i = 0; i < accepted + rejected; ++i) {
        oa::TagBody t;
        t.tag_uri = "http://localhost:8080/tags/tag-" + std::to_string(i + 1);
        if (i % 3 != 0 || i >= accepted) t.concept_uri = "http://en.wikipedia.org/wiki/C" + std::to_string(i);
        t.label = "Concept " + std::to_string(i);
        t.polarity = i < accepted ? Polarity::Accepted : Polarity::Rejected;
        t.creator = "u1";
        t.created_at = "2012-10-01T09:01:00Z";
        d.tags.push_back(t);
    }
    return d;
}

} // namespace

TEST_CASE("document layout") {
    const auto d = sample(5, 2);
    const auto text = oa::render(d);
    CHECK(text.back() == '\n');
    const auto j = nlohmann::json::parse(text);
    CHECK(j["@id"] == d.uri);
    CHECK(j["hasTarget"]["hasSource"] == d.map_uri);
    CHECK(j["hasTarget"]["hasSelector"]["value"] == "POLYGON((10.5 20, 300 20, 300 240.25, 10.5 240.25, 10.5 20))");
    const auto& bodies = j["hasBody"];
    REQUIRE(bodies.size() == 8);
    CHECK(bodies[0]["chars"] == d.text);
    int acc = 0, rej = 0;
    for (std::size_t i = 1; i < bodies.size(); ++i) {
        if (bodies[i]["polarity"] == "accepted") ++acc;
        if (bodies[i]["polarity"] == "rejected") ++rej;
        CHECK(bodies[i].contains("label"));
    }
    CHECK(acc == 5);
    CHECK(rej == 2);

    const auto empty = nlohmann::json::parse(oa::render(sample(0, 0)));
    CHECK(empty["hasBody"].size() == 1);
}

TEST_CASE("render, parse, render is byte-identical") {
    for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t r = 0; r < 4; ++r) {
            const auto d = sample(a, r);
            const auto once = oa::render(d);
            const auto parsed = oa::parse(once);
            CHECK(parsed == d);
            CHECK(oa::render(parsed) == once);
        }
    }
}

TEST_CASE("wkt polygons round trip exactly") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> c(0, 12000);
    for (int i = 0; i < 200; ++i) {
        std::vector<geo::PixelPoint> shape;
        for (int k = 0; k < 3 + i % 6; ++k) shape.push_back({c(rng), c(rng)});
        CHECK(oa::parse_wkt_polygon(oa::to_wkt_polygon(shape)) == shape);
    }
    CHECK_THROWS_AS(oa::parse_wkt_polygon("POINT(1 2)"), Error);
    CHECK_THROWS_AS(oa::parse_wkt_polygon("POLYGON((1 2, 3 x))"), Error);
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(oa::parse("{"), Error);
    CHECK_THROWS_AS(oa::parse("{\"@id\":\"x\"}"), Error);
}
