#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "delone/generate.hpp"
#include "delone/serialize.hpp"

using namespace delone;
namespace fs = std::filesystem;

TEST_CASE("windowed point set round-trips through JSON bit-exactly") {
    SplitMix64 rng(314);
    auto w = generate::jittered_window(rng, 2, 5.0, 1.0, 0.05, 0.4, 0.9);
    auto j = io::to_json(w);
    auto back = io::parse_point_set(j);
    auto* wb = std::get_if<geometry::WindowedPointSet>(&back);
    REQUIRE(wb);
    CHECK(wb->window.S == w.window.S);
    CHECK(wb->params.r == w.params.r);
    REQUIRE(wb->points.size() == w.points.size());
    for (std::size_t i = 0; i < w.points.size(); ++i) CHECK(wb->points[i] == w.points[i]);

    // through text as well (shortest round-trip serialization)
    auto j2 = io::json::parse(j.dump());
    auto back2 = io::parse_point_set(j2);
    CHECK(std::get<geometry::WindowedPointSet>(back2).points == w.points);
}

TEST_CASE("crystallographic set round-trips through JSON") {
    SplitMix64 rng(315);
    auto g = generate::jittered_periodic(rng, 1, 5, 1.0, 0.05, 0.4, 0.9);
    auto j = io::json::parse(io::to_json(g).dump());
    auto back = io::parse_point_set(j);
    auto* gb = std::get_if<geometry::CrystallographicSet>(&back);
    REQUIRE(gb);
    CHECK(gb->period == g.period);
    CHECK(gb->motif == g.motif);
}

TEST_CASE("point set parser rejects malformed documents") {
    using io::json;
    CHECK_THROWS_AS(io::parse_point_set(json{{"d", 1}}), parse_error);
    CHECK_THROWS_AS(io::parse_point_set(json::parse(
                        R"({"d":1,"r":0.4,"R":0.9,"window":[[-2,2]],"points":[[1,2]]})")),
                    parse_error);
    CHECK_THROWS_AS(io::parse_point_set(json::parse(
                        R"({"d":1,"r":0.4,"R":0.9,"window":[[-2,3]],"points":[[1]]})")),
                    parse_error);
    CHECK_THROWS_AS(io::parse_point_set(json::parse(
                        R"({"d":1,"r":-1,"R":0.9,"window":[[-2,2]],"points":[[1]]})")),
                    invalid_input);
}

TEST_CASE("measure round-trip and provenance header") {
    auto mu = measures::Measure::make({{0.25, 0.5}, {1.0, 0.125}}, {{2.0, 3.0, 0.75}});
    auto back = io::parse_measure(io::json::parse(io::to_json(mu).dump()));
    CHECK(back.atoms() == mu.atoms());
    CHECK(back.density() == mu.density());

    io::Provenance prov{"delone classify", 42};
    std::ostringstream os;
    io::CsvWriter w(os);
    w.provenance(prov);
    w.header({"a", "b"});
    w.row({io::CsvWriter::num(0.1), io::CsvWriter::num(2.0)});
    std::string text = os.str();
    CHECK(text.find("# command: delone classify") == 0);
    CHECK(text.find("a,b\n") != std::string::npos);
    CHECK(text.find("0.1,2\n") != std::string::npos);
}

TEST_CASE("JSON files carry provenance and parse back") {
    auto dir = fs::temp_directory_path() / "delone_io_test";
    fs::create_directories(dir);
    auto path = (dir / "set.json").string();
    auto g = generate::cubic_lattice(1, 1.0, 0.4, 0.9);
    io::write_json_file(path, io::to_json(g), io::Provenance{"delone extend", 7});
    auto j = io::read_json_file(path);
    CHECK(j.at("provenance").at("command") == "delone extend");
    auto back = io::parse_point_set(j);
    CHECK(std::get<geometry::CrystallographicSet>(back).period == 1.0);
    fs::remove_all(dir);
}

TEST_CASE("interval CSV and SVG emit deterministically") {
    auto set = spectra::IntervalSet::from({{0.0, 1.5}, {2.0, 3.0, true, true}}, 0.0);
    std::ostringstream a, b;
    io::write_interval_csv(a, set, io::Provenance{"delone bands", 1});
    io::write_interval_csv(b, set, io::Provenance{"delone bands", 1});
    CHECK(a.str() == b.str());
    CHECK(a.str().find("E_low,E_high,open_low,open_high") != std::string::npos);
    CHECK(a.str().find("0,1.5,0,0") != std::string::npos);
    CHECK(a.str().find("2,3,1,1") != std::string::npos);

    std::ostringstream svg;
    io::write_band_svg(svg, {{"A", set}}, 0.0, 3.0, io::Provenance{"delone bands", 1});
    CHECK(svg.str().find("<svg") == 0);
    CHECK(svg.str().find("<rect") != std::string::npos);
}
