// test_cli_io.cpp — Configuration schema and task runner

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "escat/config.hpp"

using namespace escat;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig = R"({
  "units": {"rate": "Gamma0", "length": "wavelength"},
  "medium": {"type": "waveguide1d"},
  "emitters": [{
    "id": "A",
    "position": [0, 0, 0],
    "levels": [
      {"label": "g", "kind": "ground"},
      {"label": "e", "kind": "excited"}
    ],
    "transitions": [{
      "excited": "e", "ground": "g",
      "couplings": {"right": 0.5, "left": 0.5}
    }]
  }],
  "task": "spectrum",
  "drive": {"omega": 0, "channels": {"right": 1.0}},
  "sweep": {"min": -10, "max": 10, "points": 201},
  "detectors": ["right", "left"]
})";

std::string patched(const std::string& from, const std::string& to) {
    std::string s = kMinimalConfig;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("escat_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) {
                fields.push_back(field);
                field.clear();
            } else field.push_back(c);
        }
        fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

TEST_CASE("minimal config parses and round-trips") {
    const RunConfig config = parse_config(kMinimalConfig);
    CHECK(config.system.emitters.size() == 1);
    CHECK(config.task == "spectrum");
    CHECK(config.sweep.points == 201);
    CHECK(config.detectors.size() == 2);

    const std::string emitted = emit_config(config);
    const RunConfig reparsed = parse_config(emitted);
    CHECK(emit_config(reparsed) == emitted);
    CHECK(config_hash(reparsed) == config_hash(config));
}

TEST_CASE("schema violations carry field paths") {
    SUBCASE("negative coupling") {
        try {
            parse_config(patched("\"right\": 0.5, \"left\": 0.5", "\"right\": -0.5"));
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(e.path == "emitters[0].transitions[0].couplings");
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config(patched("\"task\": \"spectrum\"", "\"task\": \"spectrum\", \"bogus\": 1"));
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(e.path == "bogus");
        }
    }
    SUBCASE("duplicate channel ids in a composite medium") {
        const std::string cfg = patched(
            "{\"type\": \"waveguide1d\"}",
            "{\"type\": \"composite\", \"members\": [{\"type\": \"waveguide1d\"}, "
            "{\"type\": \"freespace3d\", \"channel\": \"right\"}]}");
        CHECK_THROWS_AS(parse_config(cfg), SchemaError);
    }
    SUBCASE("missing units") {
        CHECK_THROWS_AS(parse_config(patched("\"rate\": \"Gamma0\"", "\"rate\": \"Hz\"")),
                        SchemaError);
    }
    SUBCASE("bad task name") {
        CHECK_THROWS_AS(parse_config(patched("\"spectrum\"", "\"render\"")), SchemaError);
    }
}

TEST_CASE("spectrum task emits a unitary sweep") {
    const RunConfig config = parse_config(kMinimalConfig);
    const fs::path dir = fresh_dir("spectrum");
    std::string err;
    REQUIRE(run(config, dir.string(), 2, "", &err) == 0);

    const auto rows = read_csv(dir / "run_spectrum.csv");
    REQUIRE(rows.size() == 1 + 201 * 2 * 2); // header + (pair + expectation) x detectors
    REQUIRE(rows[0] ==
            std::vector<std::string>{"omega", "detector", "g", "g_prime", "re", "im", "abs2"});
    std::map<std::string, double> power;
    for (size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 7);
        if (rows[i][2] == "0" && rows[i][3] == "0") power[rows[i][0]] += std::stod(rows[i][6]);
    }
    REQUIRE(power.size() == 201);
    for (const auto& [w, p] : power) CHECK(std::abs(p - 1.0) < 1e-9);

    std::ifstream meta(dir / "run_spectrum.meta.json");
    REQUIRE(meta.good());
    std::stringstream ss;
    ss << meta.rdbuf();
    CHECK(ss.str().find(config_hash(config)) != std::string::npos);
}

TEST_CASE("evolve task with zero drive keeps populations constant") {
    std::string cfg = patched("\"task\": \"spectrum\"", "\"task\": \"evolve\"");
    const std::string drive = "\"channels\": {\"right\": 1.0}";
    cfg.replace(cfg.find(drive), drive.size(), "\"channels\": {}");
    const RunConfig config = parse_config(cfg);
    const fs::path dir = fresh_dir("evolve");
    std::string err;
    REQUIRE(run(config, dir.string(), 1, "", &err) == 0);
    const auto rows = read_csv(dir / "run_evolve.csv");
    REQUIRE(rows.size() > 2);
    for (size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][1]) - 1.0) < 1e-12);
}

TEST_CASE("mint-golden is byte-identical across runs") {
    const RunConfig config = parse_config(kMinimalConfig);
    const fs::path dir1 = fresh_dir("golden1");
    const fs::path dir2 = fresh_dir("golden2");
    std::string err;
    REQUIRE(run(config, dir1.string(), 1, "mint-golden", &err) == 0);
    REQUIRE(run(config, dir2.string(), 1, "mint-golden", &err) == 0);
    std::ifstream a(dir1 / "run_golden.csv"), b(dir2 / "run_golden.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    REQUIRE(sa.str().size() > 0);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("unknown task yields a user error with JSON detail") {
    const RunConfig config = parse_config(kMinimalConfig);
    std::string err;
    CHECK(run(config, fresh_dir("err").string(), 1, "render", &err) == 1);
    CHECK(err.find("unknown task") != std::string::npos);
}
