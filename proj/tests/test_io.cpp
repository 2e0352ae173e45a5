#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpa/errors.hpp"
#include "gpa/io.hpp"
#include "gpa/pipeline.hpp"

using namespace gpa;
namespace fs = std::filesystem;

TEST_CASE("track JSON round trip preserves validation and residuals") {
    for (const char* s : {"(1001011)", "(10011)", "(101)", "10(011)", "1000(101)", "100101(10)", "1(0)"}) {
        const Pipeline p = run_pipeline(parse_seq(s), 10);
        const Json tj = track_json(p.track);
        const Json sj = spectrum_json(p.spectral);
        const Json tj2 = Json::parse(tj.dump());
        const TrainTrack t = track_from_json(tj2);
        CHECK(track_json(t) == tj);
        CHECK(t.inf_edges.size() == p.track.inf_edges.size());
        CHECK(t.pi_map == p.track.pi_map);
        CHECK(t.b_rows == p.track.b_rows);
        const ValidationReport a = validate_track(p.track, p.track.description, 10);
        const ValidationReport b = validate_track(t, description_from_json(tj2), 10);
        CHECK(a.pass == b.pass);
        CHECK(a.mismatches == b.mismatches);
        const Json sj2 = Json::parse(sj.dump());
        const ResidualReport r0 = switch_residuals(p.track, p.spectral.Y, p.spectral.Yp);
        const ResidualReport r1 = switch_residuals(t, heights_from_json(sj2), inf_heights_from_json(sj2));
        CHECK(r1.max_residual == r0.max_residual);
    }
}

TEST_CASE("malformed track JSON is a domain error") {
    CHECK_THROWS_AS(track_from_json(Json::parse("{}")), DomainError);
    CHECK_THROWS_AS(track_from_json(Json::parse(R"x({"s":"0(1)"})x")), DomainError);
    Json j = track_json(run_pipeline(parse_seq("(10011)"), 4).track);
    j["inf_edges"][0]["ends"] = Json::array({"Q"});
    CHECK_THROWS_AS(track_from_json(j), DomainError);
}

TEST_CASE("class and orbit serializers") {
    const BinarySeq s = parse_seq("(1001011)");
    const Json c = class_json(s, classify(s));
    CHECK(c["q"] == "1/3");
    CHECK(c["tag"] == "interior_low");
    CHECK(c["words"].is_object());
    const BinarySeq h = parse_seq("1(0)");
    CHECK(class_json(h, classify(h))["words"].is_null());
    const CriticalOrbit o = critical_orbit(s);
    const Json oj = orbit_json(o, strip_cover(o));
    CHECK(oj["N"] == 7);
    CHECK(oj["A"].size() == 6);
}

TEST_CASE("points CSV") {
    const std::string csv = points_csv({{1, 0.5, 0.25}, {2, 1.0 / 3, 0.1}});
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "strip,x,y");
    std::getline(in, line);
    CHECK(line == "1,0.5,0.25");
    std::getline(in, line);
    CHECK(line.rfind("2,0.33333333333333331,", 0) == 0);
}

TEST_CASE("atomic_write replaces the target and leaves no temporaries") {
    const fs::path dir = fs::temp_directory_path() / "gpa_io_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string path = (dir / "out.json").string();
    atomic_write(path, "first");
    atomic_write(path, "second");
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text == "second");
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    CHECK_THROWS(atomic_write((dir / "missing" / "x").string(), "y"));
    fs::remove_all(dir);
}
