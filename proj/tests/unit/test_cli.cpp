#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "epi/cli.hpp"

using namespace epi;
using namespace epi::test;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string fig1_path() { return data_path("fig1.json").string(); }

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("epi_test_" + name);
}

}  // namespace

TEST_CASE("check")
{
    auto r = run({"check", "--model", fig1_path(), "--state", "t", "--formula", "R{1,2}(p & K1 p)"});
    CHECK(r.status == 0);
    CHECK(r.out == "true\n");

    r = run({"check", "--model", fig1_path(), "--state", "s", "--formula", "p"});
    CHECK(r.status == 1);
    CHECK(r.out == "false\n");

    r = run({"check", "--model", fig1_path(), "--formula", "p"});
    CHECK(r.status == 1);
    CHECK(r.out == "{t,v,w}\n");

    r = run({"check", "--model", fig1_path(), "--formula", "p | ~p", "--json"});
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["valid"] == true);
    CHECK(j["extension"].size() == 5);

    r = run({"check", "--model", fig1_path(), "--state", "t", "--formula", "K1 p", "--json"});
    CHECK(nlohmann::json::parse(r.out) == nlohmann::json{{"formula", "K1 p"}, {"state", "t"}, {"value", false}});
}

TEST_CASE("input errors exit 2 and name the location")
{
    auto r = run({"check", "--model", fig1_path(), "--state", "t", "--formula", "R{}(p)"});
    CHECK(r.status == 2);
    CHECK(r.err.find("at 1: empty group") != std::string::npos);

    r = run({"check", "--model", fig1_path(), "--state", "t", "--formula", "D{1,3} p"});
    CHECK(r.status == 2);
    CHECK(r.err.find("undeclared agent '3'") != std::string::npos);

    r = run({"check", "--model", fig1_path(), "--state", "zz", "--formula", "p"});
    CHECK(r.status == 2);
    CHECK(r.err.find("unknown state 'zz'") != std::string::npos);

    r = run({"check", "--model", "/nonexistent.json", "--formula", "p"});
    CHECK(r.status == 2);

    auto bad = temp_file("bad.json");
    {
        std::ofstream(bad) << R"({"agents":["1"],"states":["s","t"],"relations":{"1":[["s","t"],["t"]]}})";
    }
    r = run({"check", "--model", bad.string(), "--formula", "p"});
    CHECK(r.status == 2);
    CHECK(r.err.find("agent 1 partition has overlapping blocks at t") != std::string::npos);
    {
        std::ofstream(bad) << "{ not json";
    }
    r = run({"check", "--model", bad.string(), "--formula", "p"});
    CHECK(r.status == 2);
    CHECK(r.err.find(bad.string()) != std::string::npos);
    std::filesystem::remove(bad);

    CHECK(run({}).status == 2);
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({"check", "--formula", "p"}).status == 2);
    CHECK(run({"search", "--formula", "p", "--mode", "maybe"}).status == 2);
    CHECK(run({"--help"}).status == 0);
    CHECK(run({"delta", "--target", "", "--sequence", "1"}).status == 2);
}

TEST_CASE("resolve writes the communication core")
{
    auto out = temp_file("core.json");
    auto r = run({"resolve", "--model", fig1_path(), "--group", "1,2", "--out", out.string()});
    CHECK(r.status == 0);
    CHECK(load_model(out) == core());
    std::ifstream a(out), b(data_path("core.json"));
    CHECK(nlohmann::json::parse(a) == nlohmann::json::parse(b));
    std::filesystem::remove(out);

    r = run({"resolve", "--model", fig1_path(), "--group", "1,3"});
    CHECK(r.status == 2);
}

TEST_CASE("delta, reduce and closure")
{
    CHECK(run({"delta", "--target", "2", "--sequence", "1,2;1,3"}).out == "1,2\n");
    CHECK(run({"delta", "--target", "3"}).out == "3\n");
    CHECK(run({"delta", "--target", "1", "--sequence", "1,2", "--json"}).out == "{\"delta\":\"1,2\"}\n");

    auto r = run({"reduce", "--formula", "R{1,2}(p & ~K1 p)"});
    CHECK(r.status == 0);
    CHECK(r.out == "p & ~D{1,2} p\n");
    r = run({"reduce", "--formula", "R{a} K b p", "--agents", "a,b", "--json"});
    CHECK(nlohmann::json::parse(r.out)["output"] == "K b p");

    r = run({"closure", "--formula", "K1 p"});
    CHECK(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
    CHECK(run({"closure", "--formula", "[p] p"}).status == 2);
}

TEST_CASE("reduce then check agrees with check on the bundled corpus")
{
    std::ifstream in(data_path("formulas.txt"));
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto reduced = run({"reduce", "--formula", line, "--agents", "1,2"});
        REQUIRE(reduced.status == 0);
        const std::string normal = reduced.out.substr(0, reduced.out.size() - 1);
        for (const char* model : {"fig1.json", "core.json"}) {
            auto direct = run({"check", "--model", data_path(model).string(), "--formula", line});
            auto via = run({"check", "--model", data_path(model).string(), "--formula", normal});
            CHECK_MESSAGE(direct.out == via.out, line << " vs " << normal);
            CHECK(direct.status == via.status);
        }
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("bisim")
{
    auto r = run({"bisim", "--left", fig1_path(), "--left-state", "t", "--right", fig1_path(), "--right-state", "t"});
    CHECK(r.status == 0);
    CHECK(r.out.starts_with("bisimilar: [[\"s\",\"s\"]"));
    r = run({"bisim", "--left", fig1_path(), "--left-state", "t", "--right", fig1_path(), "--right-state", "u"});
    CHECK(r.status == 1);
    CHECK(r.out == "not bisimilar\n");
    r = run({"bisim", "--trans", "--json", "--left", data_path("core.json").string(), "--left-state", "t", "--right",
             fig1_path(), "--right-state", "t"});
    CHECK(r.status == 1);
    CHECK(nlohmann::json::parse(r.out)["bisimilar"] == false);
}

TEST_CASE("search")
{
    auto r = run({"search", "--formula", "D{1,2}(p & ~K1 p)", "--max-states", "2", "--json"});
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "witness");
    CHECK(j["state"] == "0");
    CHECK(j["models_examined"] == 8);
    // The witness model round-trips through the model reader.
    CHECK(std::get<Model>(structure_from_json(j["model"])).num_states() == 2);

    r = run({"search", "--formula", "p & ~p"});
    CHECK(r.status == 1);
    CHECK(r.out.starts_with("no model up to 4 states"));
    r = run({"search", "--formula", "K1 p -> p", "--mode", "counter", "--max-states", "3"});
    CHECK(r.status == 1);
    CHECK(r.out.starts_with("no countermodel up to 3 states"));
    r = run({"search", "--formula", "K1 p -> K2 p", "--mode", "counter", "--agents", "1,2,3"});
    CHECK(r.status == 0);
    CHECK(r.out.starts_with("countermodel at state"));
}

TEST_CASE("axioms")
{
    auto r = run({"axioms", "--system", "RD", "--max-states", "2", "--instances", "20"});
    CHECK(r.status == 0);
    CHECK(r.out.find("total violations: 0") != std::string::npos);
    r = run({"axioms", "--system", "RD", "--max-states", "3", "--instances", "40", "--mutation", "td-converse",
             "--json"});
    CHECK(r.status == 1);
    CHECK(nlohmann::json::parse(r.out)["violations"].get<int>() > 0);
    r = run({"axioms", "--rrc", "--max-states", "2", "--instances", "20"});
    CHECK(r.status == 0);
    CHECK(run({"axioms", "--system", "S5"}).status == 2);
}
