#include "support.hpp"

#include "semtag/api.hpp"
#include "semtag/fixture_context.hpp"
#include "semtag/util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>

using namespace semtag;
using nlohmann::json;

namespace {

class DownProvider : public suggest::EntityProvider, public suggest::GazetteerProvider {
public:
    std::vector<suggest::ScoredConcept> recognize(std::string_view) override {
        throw Error(ErrorCode::ProviderUnavailable, "entity service unreachable");
    }
    std::vector<KnowledgeResource> within(const geo::GeoBBox&, std::size_t) override {
        throw Error(ErrorCode::ProviderUnavailable, "gazetteer unreachable");
    }
};

Providers fixture_providers() {
    ServiceConfig cfg;
    cfg.fixture_concepts = testsupport::fixture("concepts.jsonl");
    return make_providers(cfg);
}

struct Service {
    testsupport::TempDir dir;
    std::unique_ptr<AnnotationStore> store;
    std::unique_ptr<Api> api;

    explicit Service(Providers p = fixture_providers(), std::size_t cap = 15) {
        open(std::move(p), cap);
        std::ifstream maps(testsupport::fixture("maps.jsonl"));
        for (auto& m : read_map_records(maps)) store->put_map(m);
    }
    void open(Providers p = fixture_providers(), std::size_t cap = 15) {
        api.reset();
        store.reset();
        store = std::make_unique<AnnotationStore>(StoreOptions{dir.path(), "http://maps.test", cap, {}});
        api = std::make_unique<Api>(*store, std::move(p), cap);
    }
    ApiResponse get(const std::string& path, std::map<std::string, std::string> q = {}) {
        return api->handle({"GET", path, std::move(q), ""});
    }
    ApiResponse post(const std::string& path, const std::string& body, std::map<std::string, std::string> q = {}) {
        return api->handle({"POST", path, std::move(q), body});
    }
    std::string create(const std::string& map_id, const std::string& text, const std::string& condition,
                       const std::string& shape = "[[5300,2600],[5450,2600],[5450,2760],[5300,2760]]") {
        const auto r = post("/maps/" + map_id + "/annotations",
                            R"({"shape":)" + shape + R"(,"body":)" + json(text).dump() +
                                R"(,"creator":{"id":"u1","name":"User One"},"condition":")" + condition + "\"}");
        REQUIRE(r.status == 201);
        return json::parse(r.body)["id"].get<std::string>();
    }
    void add_gibraltar_control_points() {
        std::ifstream in(testsupport::fixture("control_points.jsonl"));
        json arr = json::array();
        for (const auto& rec : geo::read_control_points(in)) {
            if (rec.map_id != "waldseemuller") continue;
            arr.push_back({{"px", rec.point.pixel.x}, {"py", rec.point.pixel.y},
                           {"lon", rec.point.geo.lon}, {"lat", rec.point.geo.lat}});
        }
        REQUIRE(post("/maps/waldseemuller/control_points", arr.dump()).status == 201);
    }
};

json body(const ApiResponse& r) { return json::parse(r.body); }

std::vector<std::string> suggestion_labels(const json& j) {
    std::vector<std::string> out;
    for (const auto& s : j["suggestions"]) out.push_back(s["label"]);
    return out;
}

} // namespace

TEST_CASE("maps") {
    Service s;
    auto r = s.get("/maps");
    CHECK(r.status == 200);
    CHECK(r.content_type == "application/json");
    CHECK(body(r).size() == 2);
    CHECK(s.get("/maps/nope").status == 404);

    std::ifstream maps(testsupport::fixture("maps.jsonl"));
    for (const auto& m : read_map_records(maps)) {
        const auto got = map_from_json(s.get("/maps/" + m.id).body);
        CHECK(got == m);
    }

    const auto created = s.post("/maps", R"({"id":"m3","title":"Third","image_uri":"https://x/3.jpg","width":10,"height":10})");
    CHECK(created.status == 201);
    CHECK(created.headers.at("Location") == "http://maps.test/maps/m3");
    CHECK(s.post("/maps", R"({"id":"m4"})").status == 400);
}

TEST_CASE("control points and transform") {
    Service s;
    CHECK(s.get("/maps/east-coast/transform").status == 409);
    const std::string two = R"([{"px":0,"py":0,"lon":-80,"lat":45},{"px":8000,"py":0,"lon":-66,"lat":45}])";
    CHECK(s.post("/maps/east-coast/control_points", two).status == 201);
    const auto r = s.get("/maps/east-coast/transform");
    CHECK(r.status == 409);
    CHECK(body(r)["error"] == "insufficient-data");

    CHECK(s.post("/maps/east-coast/control_points", R"({"px":0,"py":6000,"lon":-80,"lat":35,"label":"SW"})").status == 201);
    const auto t = body(s.get("/maps/east-coast/transform"));
    CHECK(t["rms_residual"].get<double>() < 1e-9);
    CHECK(t["control_points"] == 3);
    const auto pts = body(s.get("/maps/east-coast/control_points"));
    REQUIRE(pts.size() == 3);
    CHECK(pts[2]["label"] == "SW");
    CHECK(pts[1]["lon"] == -66);
    CHECK(s.post("/maps/east-coast/control_points", R"([{"px":1}])").status == 400);
    CHECK(s.post("/maps/nope/control_points", two).status == 404);
}

TEST_CASE("annotations dereference to the serialized document") {
    Service s;
    const auto r = s.post("/maps/waldseemuller/annotations",
                          R"({"shape":[[10,10],[200,10],[200,90]],"body":"Pillars of Hercules","creator":"u9","condition":"LT"})");
    REQUIRE(r.status == 201);
    const auto id = body(r)["id"].get<std::string>();
    const auto uri = body(r)["uri"].get<std::string>();
    CHECK(r.headers.at("Location") == uri);
    CHECK(uri == "http://maps.test/annotations/" + id);

    const auto g = s.get("/annotations/" + id);
    CHECK(g.status == 200);
    CHECK(g.content_type == "application/json");
    CHECK(g.body == s.store->serialize_open_annotation(id));
    CHECK(body(g)["@id"] == uri);

    CHECK(s.get("/annotations/nope").status == 404);
    const auto hits = body(s.get("/search", {{"q", "hercules"}}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0]["id"] == id);

    CHECK(s.post("/maps/waldseemuller/annotations", R"({"shape":[[-1,5],[10,5],[10,10]],"creator":"u"})").status == 400);
    CHECK(s.post("/maps/waldseemuller/annotations", "not json").status == 400);
    CHECK(s.post("/maps/nope/annotations", R"({"shape":[[1,5],[10,5],[10,10]],"creator":"u"})").status == 404);
    CHECK(body(s.get("/maps/waldseemuller/annotations")).size() == 1);
}

TEST_CASE("text suggestions, abstracts and tag cycling") {
    Service s;
    const auto text = read_file(testsupport::fixture("gibraltar.txt"));
    const auto ctx = s.create("waldseemuller", text, "SMT_CTX");
    auto r = s.get("/suggest/text", {{"annotation", ctx}, {"q", text}});
    REQUIRE(r.status == 200);
    auto j = body(r);
    CHECK(j["fallback"] == false);
    const auto labels = suggestion_labels(j);
    REQUIRE(std::find(labels.begin(), labels.end(), "Mediterranean Sea") != labels.end());
    json med;
    for (const auto& x : j["suggestions"])
        if (x["label"] == "Mediterranean Sea") med = x;
    CHECK(med["uri"] == "http://en.wikipedia.org/wiki/Mediterranean_sea");
    CHECK(med["state"] == "neutral");
    CHECK(med.contains("abstract"));

    const auto smt = s.create("waldseemuller", text, "SMT");
    j = body(s.get("/suggest/text", {{"annotation", smt}}));
    CHECK_FALSE(j["suggestions"].empty());
    for (const auto& x : j["suggestions"]) CHECK_FALSE(x.contains("abstract"));

    const std::string key = med["key"];
    const std::string base = "/annotations/" + ctx + "/tags/" + key + "/cycle";
    CHECK(body(s.post(base, ""))["state"] == "accepted");
    CHECK(body(s.post(base, ""))["state"] == "rejected");
    CHECK(body(s.post(base, ""))["state"] == "neutral");
    CHECK(s.post("/annotations/" + ctx + "/tags/http://nowhere/x/cycle", "").status == 404);
    // The relationship id works as an alias.
    CHECK(body(s.post("/annotations/" + ctx + "/tags/" + med["tag_id"].get<std::string>() + "/cycle", ""))["state"] ==
          "accepted");
    const auto doc = body(s.get("/annotations/" + ctx));
    CHECK(doc["hasBody"].size() == 2);

    // Judged concepts are not offered again.
    j = body(s.get("/suggest/text", {{"annotation", ctx}, {"q", text}}));
    for (const auto& x : j["suggestions"]) CHECK(x["key"] != key);

    const auto tags = body(s.get("/annotations/" + ctx + "/tags"));
    CHECK(tags.size() >= 1);
    const auto judgments = body(s.get("/judgments"));
    REQUIRE(judgments.size() == 1);
    CHECK(judgments[0]["concept"] == "http://en.wikipedia.org/wiki/Mediterranean_sea");
    CHECK(judgments[0]["sign"] == 1);
}

TEST_CASE("related expansion") {
    Service s;
    const auto a = s.create("waldseemuller", "Paris", "SMT");
    const auto j = body(s.get("/suggest/text", {{"annotation", a}, {"related", "1"}}));
    const auto labels = suggestion_labels(j);
    CHECK(std::find(labels.begin(), labels.end(), "France") != labels.end());
    CHECK(std::find(labels.begin(), labels.end(), "Eiffel Tower") != labels.end());
}

TEST_CASE("condition gates") {
    Service s;
    const auto lt = s.create("east-coast", "Ithaca", "LT");
    CHECK(s.get("/suggest/text", {{"annotation", lt}}).status == 409);
    CHECK(s.get("/suggest/region", {{"annotation", lt}}).status == 409);
    const auto added = body(s.post("/annotations/" + lt + "/labels", R"({"tags":"Ithaca, Cornell University, ithaca"})"));
    CHECK(added.size() == 2);

    const auto st = s.create("east-coast", "anything", "ST");
    CHECK(s.post("/annotations/" + st + "/labels", R"({"tags":"x"})").status == 409);
    const auto j = body(s.get("/suggest/text", {{"annotation", st}}));
    const auto labels = suggestion_labels(j);
    CHECK(labels.size() == 2);
    for (const auto& x : j["suggestions"]) CHECK(x["origin"] == "history");
    CHECK(s.get("/suggest/text").status == 400);
    CHECK(s.get("/suggest/text", {{"annotation", "nope"}}).status == 404);
}

TEST_CASE("region suggestions") {
    Service s;
    const auto a = s.create("waldseemuller", "", "SMT_CTX");
    CHECK(s.get("/suggest/region", {{"annotation", a}}).status == 409);
    s.add_gibraltar_control_points();
    auto r = s.get("/suggest/region", {{"annotation", a}});
    REQUIRE(r.status == 200);
    auto j = body(r);
    CHECK(j.contains("bbox"));
    const auto labels = suggestion_labels(j);
    CHECK(std::find(labels.begin(), labels.end(), "Strait of Gibraltar") != labels.end());
    for (const auto& x : j["suggestions"]) CHECK(x["origin"] == "region");

    // A region of open ocean far from any fixture concept.
    const auto empty = s.create("waldseemuller", "", "SMT", "[[100,6000],[300,6000],[300,6200],[100,6200]]");
    r = s.get("/suggest/region", {{"annotation", empty}});
    CHECK(r.status == 200);
    CHECK(body(r)["suggestions"].empty());
}

TEST_CASE("response never exceeds the cap") {
    std::vector<suggest::FixtureConcept> many;
    for (int i = 0; i < 40; ++i) {
        KnowledgeResource kr{"http://x/c" + std::to_string(i), "Concept " + std::to_string(i), std::nullopt, "big", std::nullopt};
        many.push_back({kr, {}, {"alpha"}, 0.5});
    }
    auto ctx = std::make_shared<suggest::FixtureKnowledgeContext>(many);
    Service s(Providers{ctx, ctx, ctx});
    const auto a = s.create("waldseemuller", "alpha", "SMT");
    const auto j = body(s.get("/suggest/text", {{"annotation", a}}));
    CHECK(j["suggestions"].size() == 15);
    CHECK(s.store->annotation(a).tags.size() == 15);
}

TEST_CASE("provider outage degrades suggestions and leaves mutations available") {
    auto down = std::make_shared<DownProvider>();
    auto fixture = fixture_providers();
    Service s(Providers{down, down, fixture.related});
    const auto a = s.create("waldseemuller", "Strait of Gibraltar", "SMT");
    auto r = s.get("/suggest/text", {{"annotation", a}});
    CHECK(r.status == 502);
    CHECK(body(r)["fallback"] == true);
    CHECK(body(r)["suggestions"].empty());
    s.add_gibraltar_control_points();
    CHECK(s.get("/suggest/region", {{"annotation", a}}).status == 502);

    CHECK(s.store->annotation(a).tags.empty());
    const auto b = s.create("waldseemuller", "still works", "LT");
    CHECK(s.post("/annotations/" + b + "/labels", R"({"tags":"Gibraltar"})").status == 201);
    CHECK(s.post("/annotations/" + b + "/tags/label:gibraltar/cycle", "").status == 200);
}

TEST_CASE("statistics endpoints") {
    Service s;
    auto r = s.post("/stats/chi-square", read_file(testsupport::table("tag_types.csv")));
    REQUIRE(r.status == 200);
    CHECK(std::abs(body(r)["statistic"].get<double>() - 1.0516) < 0.005);
    CHECK(body(r)["df"] == 3);

    r = s.post("/stats/friedman", read_file(testsupport::table("ranking_intuitiveness.csv")));
    REQUIRE(r.status == 200);
    CHECK(std::abs(body(r)["statistic"].get<double>() - 16.05) < 0.01);

    r = s.post("/stats/kappa", "a,a\nb,b\na,b\nb,a\n");
    CHECK(body(r)["statistic"].get<double>() == doctest::Approx(0.0));

    CHECK(s.post("/stats/chi-square", "c,A,B\nx,0,0\ny,0,0\n").status == 422);
    CHECK(s.post("/stats/friedman", "c,1,2\nA,2,0\nB,1,1\n").status == 422);
    CHECK(s.post("/stats/chi-square", "garbage").status == 400);
    CHECK(s.get("/stats/nonsense").status == 404);
    CHECK(s.post("/stats/nonsense", "").status == 404);
    CHECK(s.get("/stats/friedman").status == 409);
    CHECK(s.get("/stats/chi-square").status == 422);  // no coded tags yet

    std::ifstream in(testsupport::fixture("experiment.jsonl"));
    ingest_annotation_records(*s.store, in);
    const auto means = body(s.get("/stats/means"))["conditions"];
    CHECK(means[0]["accepted"].get<double>() * 24 == doctest::Approx(65));
    CHECK(means[3]["rejected"].get<double>() * 24 == doctest::Approx(60));
    const auto freq = body(s.get("/stats/frequencies"))["conditions"];
    CHECK(freq["LT"][0]["label"] == "Ithaca");
    CHECK(freq["LT"][0]["count"] == 6);
    const auto evo = body(s.get("/stats/evolution"))["series"];
    CHECK(evo["SMT_CTX"].back() == 73);
    CHECK(evo["LT"].size() == 96);
    CHECK(std::abs(body(s.get("/stats/chi-square"))["statistic"].get<double>() - 1.0516) < 0.005);
    CHECK(std::abs(body(s.get("/stats/chi-square", {{"table", "categories"}}))["statistic"].get<double>() - 17.30) < 0.05);
}

TEST_CASE("restart reproduces every GET response") {
    Service s;
    const auto text = read_file(testsupport::fixture("gibraltar.txt"));
    const auto a = s.create("waldseemuller", text, "SMT_CTX");
    const auto sugg = body(s.get("/suggest/text", {{"annotation", a}}));
    s.post("/annotations/" + a + "/tags/" + sugg["suggestions"][0]["key"].get<std::string>() + "/cycle", "");
    const auto b = s.create("east-coast", "Ithaca in winter", "LT", "[[10,10],[50,10],[50,50],[10,50]]");
    s.post("/annotations/" + b + "/labels", R"({"tags":"Ithaca, snow"})");
    s.post("/maps/east-coast/control_points",
           R"([{"px":0,"py":0,"lon":-80,"lat":45},{"px":8000,"py":0,"lon":-66,"lat":45},{"px":0,"py":6000,"lon":-80,"lat":35}])");

    const std::vector<std::pair<std::string, std::map<std::string, std::string>>> paths{
        {"/maps", {}}, {"/maps/east-coast", {}}, {"/maps/east-coast/transform", {}},
        {"/maps/east-coast/control_points", {}}, {"/maps/waldseemuller/annotations", {}},
        {"/annotations/" + a, {}}, {"/annotations/" + b, {}}, {"/annotations/" + a + "/tags", {}},
        {"/annotations/" + b + "/tags", {}}, {"/search", {{"q", "ithaca"}}}, {"/judgments", {}},
        {"/stats/means", {}}, {"/stats/frequencies", {}}, {"/stats/evolution", {}}, {"/", {}}};
    std::vector<ApiResponse> before;
    for (const auto& [p, q] : paths) before.push_back(s.get(p, q));
    s.open();
    for (std::size_t i = 0; i < paths.size(); ++i) {
        CAPTURE(paths[i].first);
        const auto after = s.get(paths[i].first, paths[i].second);
        CHECK(after.status == before[i].status);
        CHECK(after.body == before[i].body);
    }
}

TEST_CASE("unknown routes") {
    Service s;
    CHECK(s.get("/nothing").status == 404);
    CHECK(s.api->handle({"DELETE", "/maps", {}, ""}).status == 404);
    CHECK(body(s.get("/"))["service"] == "semtag");
}
