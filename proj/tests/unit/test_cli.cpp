#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qres/cli.hpp"

using namespace qres::cli;

namespace {

std::string message_of(const std::string& text)
{
    try {
        RunConfig::from_text(text, "t.ini");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("qres-unit-" + name);
    std::filesystem::remove_all(p);
    return p;
}

int run_args(std::vector<std::string> args, std::string* out_text = nullptr)
{
    args.insert(args.begin(), "qres");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

Json read_json(const std::filesystem::path& p)
{
    std::ifstream in(p);
    return Json::parse(in);
}

}  // namespace

TEST_CASE("config parsing and line-anchored errors")
{
    const RunConfig c = RunConfig::from_text("[model]\npreset = diamond\n# comment\nomega = 0.25 ; trailing\n", "t.ini");
    CHECK(c.preset() == Preset::diamond);
    CHECK(c.get_double("model", "omega") == 0.25);
    CHECK(c.where("model", "omega") == "t.ini:4: ");
    CHECK(c.get_list("model", "energies").size() == 4);

    CHECK(message_of("[model]\npreset = dicke-rwa\nbogus = 1\n").rfind("t.ini:3: unknown key 'bogus'", 0) == 0);
    CHECK(message_of("[model]\npreset = dicke-rwa\nenergies = 0,1\n").rfind("t.ini:3: unknown key", 0) == 0);
    CHECK(message_of("[nope]\n").rfind("t.ini:1: unknown section", 0) == 0);
    CHECK(message_of("[model]\npreset = dicke-rwa\ng = 0.1\ng = 0.2\n").rfind("t.ini:4: duplicate key", 0) == 0);
    CHECK(message_of("[model]\npreset = dicke-rwa\ng = abc\n").rfind("t.ini:3:", 0) == 0);
    CHECK(message_of("[model]\npreset = dicke-rwa\n[task]\ngrid_points = 0\n").rfind("t.ini:4:", 0) == 0);
    CHECK(message_of("[model]\natoms = 1\n").find("no preset") != std::string::npos);
    CHECK(message_of("[model]\npreset = laser\n").rfind("t.ini:2: unknown preset", 0) == 0);

    // the command-line preset wins over the file
    const RunConfig o = RunConfig::from_text("[model]\npreset = dicke-rwa\n", "t.ini", Preset::dicke_nonrwa);
    CHECK(o.preset() == Preset::dicke_nonrwa);
}

TEST_CASE("resolved config round-trips")
{
    for (Preset p : {Preset::dicke_rwa, Preset::dicke_nonrwa, Preset::dicke_classical, Preset::diamond}) {
        const RunConfig a = RunConfig::from_preset(p);
        const RunConfig b = RunConfig::from_text(a.to_ini(), "resolved.ini");
        CHECK(a.to_json() == b.to_json());
        CHECK(a.to_json().begin().key() == "preset");
    }
}

TEST_CASE("report number formatting")
{
    CHECK(format12(1.0 / 3.0) == "0.333333333333");
    CHECK(format12(-0.0) == "0");
    CHECK(round12(2.0 / 3.0) == 0.666666666667);
    CHECK(number(std::nan("")).is_null());
    CsvTable t({"a", "b"});
    t.add_row(std::vector<std::string>{"x,y", "1"});
    CHECK(t.str() == "a,b\n\"x,y\",1\n");
    CHECK_THROWS(t.add_row(std::vector<double>{1.0}));
}

TEST_CASE("resonances command on the diamond preset")
{
    const auto dir = scratch("diamond");
    std::string log;
    REQUIRE(run_args({"resonances", "--preset", "diamond", "--out", dir.string(), "--seedless"}, &log) == kOk);
    const Json doc = read_json(dir / "resonances.json");
    CHECK(doc["command"] == "resonances");
    CHECK(doc["config"]["preset"] == "diamond");
    CHECK(doc["count"] == 6);
    CHECK(std::filesystem::exists(dir / "resonances.csv"));
    CHECK(std::filesystem::exists(dir / "config.ini"));
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"command", "preset", "config", "kind", "count", "resonances"});

    // a second run produces identical bytes
    std::ifstream f1(dir / "resonances.json");
    const std::string first((std::istreambuf_iterator<char>(f1)), {});
    REQUIRE(run_args({"resonances", "--preset", "diamond", "--out", dir.string()}) == kOk);
    std::ifstream f2(dir / "resonances.json");
    CHECK(first == std::string((std::istreambuf_iterator<char>(f2)), {}));
}

TEST_CASE("exit codes")
{
    const auto dir = scratch("codes");
    CHECK(run_args({"resonances"}) == kConfigError);
    CHECK(run_args({"resonances", "--preset", "laser"}) == kConfigError);
    CHECK(run_args({"fly", "--preset", "diamond"}) == kConfigError);

    std::filesystem::create_directories(dir);
    const auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream((dir / name).string()) << text;
        return (dir / name).string();
    };
    std::string log;
    CHECK(run_args({"resonances", "--config", write("u.ini", "[model]\npreset = diamond\nfoo = 1\n")}, &log) ==
          kConfigError);
    CHECK(log.find("u.ini:3: unknown key 'foo'") != std::string::npos);

    const std::string resonant = write("r.ini", "[model]\npreset = dicke-rwa\natom_frequency = 1\n");
    CHECK(run_args({"effective", "--config", resonant, "--out", (dir / "r").string()}) == kResonantRefusal);

    const std::string close = write("d.ini", "[model]\npreset = diamond\nomega = 0.65\n");
    CHECK(run_args({"effective", "--config", close, "--out", (dir / "d").string()}) == kResonantRefusal);

    const std::string edge = write("e.ini", "[model]\npreset = dicke-rwa\natom_frequency = 1\nn_max = 4\ng = 0.05\n"
                                            "[task]\ninitial_photons = 3\nt_max = 100\n");
    CHECK(run_args({"evolve", "--config", edge, "--out", (dir / "e").string()}) == kTruncationLimited);
}

TEST_CASE("command outputs for the preset examples")
{
    const auto dir = scratch("examples");
    std::filesystem::create_directories(dir);
    const auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream((dir / name).string()) << text;
        return (dir / name).string();
    };

    REQUIRE(run_args({"resonances", "--preset", "dicke-rwa", "--out", (dir / "tl").string()}) == kOk);
    const Json tl = read_json(dir / "tl" / "resonances.json");
    CHECK(tl["count"] == 1);
    CHECK(tl["resonances"][0]["class"] == "explicit");

    const std::string two = write("two.ini", "[model]\npreset = diamond\natoms = 2\n");
    REQUIRE(run_args({"resonances", "--config", two, "--out", (dir / "d2").string()}) == kOk);
    CHECK(read_json(dir / "d2" / "resonances.json")["count"] == 21);

    REQUIRE(run_args({"effective", "--preset", "dicke-nonrwa", "--out", (dir / "n").string()}) == kOk);
    std::vector<std::pair<int, int>> kl;
    const Json nonrwa = read_json(dir / "n" / "effective.json");
    for (const auto& t : nonrwa["results"]["terms"]) kl.emplace_back(t["k"].get<int>(), t["l"].get<int>());
    CHECK(kl == std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {1, 2}, {2, 1}});

    REQUIRE(run_args({"effective", "--preset", "dicke-classical", "--out", (dir / "c").string()}) == kOk);
    const Json classical = read_json(dir / "c" / "effective.json");
    CHECK(classical["results"]["terms"].size() == 3);
    for (const auto& t : classical["results"]["terms"]) CHECK(t["k"] == 1);

    const std::string free = write("free.ini", "[model]\npreset = dicke-nonrwa\ng = 0\n");
    REQUIRE(run_args({"effective", "--config", free, "--out", (dir / "g0").string()}) == kOk);
    CHECK(read_json(dir / "g0" / "effective.json")["results"]["terms"].empty());

    const std::string resonant = write("res.ini", "[model]\npreset = dicke-rwa\natom_frequency = 1\n");
    REQUIRE(run_args({"evolve", "--config", resonant, "--out", (dir / "ev").string()}) == kOk);
    CHECK(read_json(dir / "ev" / "evolve.json")["summary"]["max_transition"].get<double>() >= 0.999);
}

TEST_CASE("scans locate every realizable diamond resonance")
{
    const auto dir = scratch("scan");
    REQUIRE(run_args({"scan", "--preset", "diamond", "--out", dir.string()}) == kOk);
    const Json doc = read_json(dir / "peaks.json");
    CHECK(doc["peaks"].size() == 5);
    for (const auto& p : doc["peaks"]) {
        CHECK(p["found"] == true);
        CHECK(p["gap"].get<double>() > 1e-10);
        CHECK(p["rel_error"].get<double>() < 0.01);
    }
    bool photon_assisted_skipped = false;
    for (const auto& s : doc["skipped"]) photon_assisted_skipped |= s["reason"] == "frequency-independent";
    CHECK(photon_assisted_skipped);

    REQUIRE(run_args({"scan", "--preset", "dicke-nonrwa", "--out", (dir / "n").string()}) == kOk);
    const Json n = read_json(dir / "n" / "peaks.json");
    REQUIRE(n["peaks"].size() == 1);
    CHECK(n["peaks"][0]["label"] == "k=1 l=1");
    CHECK(n["peaks"][0]["rel_error"].get<double>() < 1e-6);
}
