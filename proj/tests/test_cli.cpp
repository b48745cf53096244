#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string binary()
{
    const char* b = std::getenv("DNLS_BIN");
    return b ? b : "dnls";
}

fs::path scratch()
{
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() / "dnls_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args)
{
    std::string cmd = binary() + " " + args + " >" + (scratch() / "stdout").string() + " 2>"
        + (scratch() / "stderr").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

nlohmann::json without_timestamp(nlohmann::json j)
{
    j.erase("timestamp");
    return j;
}

} // namespace

TEST_CASE("generate-energies")
{
    auto dir = scratch() / "gen";
    CHECK(run("generate-energies 2 --out " + dir.string()) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "energies.json"));
    CHECK(j.size() == 3);
    CHECK(slurp(scratch() / "stdout").find("E_2: 4 monomials") != std::string::npos);
    CHECK(run("generate-energies 0 --out " + dir.string()) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "energies.json")).size() == 1);
    CHECK(run("generate-energies 40 --out " + dir.string()) == 2);
}

TEST_CASE("verify")
{
    auto a = scratch() / "a.json";
    CHECK(run("verify symbolic --seed 3 --out " + a.string()) == 0);
    auto ja = nlohmann::json::parse(slurp(a));
    CHECK(run("verify symbolic --seed 3 --out " + a.string()) == 0);
    auto jb = nlohmann::json::parse(slurp(a));
    CHECK(ja["verdict"]["pass"] == true);
    CHECK(without_timestamp(ja) == without_timestamp(jb));
    CHECK(run("verify nonsense") == 2);
    CHECK(run("verify symbolic --paper-anchor --out " + a.string()) == 0);
    CHECK(slurp(a).find("anchor") != std::string::npos);
}

TEST_CASE("evolve")
{
    auto out = scratch() / "series.csv";
    CHECK(run("evolve --demo --grid 1024 --domain 200 --t-final 0.2 --monitor M --monitor a_u --lambda-sq 0,4 --format csv --out "
              + out.string())
          == 0);
    auto csv = slurp(out);
    CHECK(csv.find("M_re") != std::string::npos);
    CHECK(csv.find("a(") != std::string::npos);
    CHECK(run("evolve " + (scratch() / "missing.bin").string()) == 2);
    CHECK(run("evolve") == 2);
    CHECK(run("evolve --demo --dt 0.5") == 1);
}

TEST_CASE("config file with flag override")
{
    auto cfg = scratch() / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "grid=1024\ndomain=200\nt-final=0.1\ndt=0.5\n";
    }
    auto out = scratch() / "cfg.json";
    CHECK(run("evolve --demo --config " + cfg.string() + " --dt 0.001 --out " + out.string()) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["dt"] == 0.001);
    CHECK(j["grid"] == 1024);
    CHECK(j["overrides"].contains("--grid"));
}

TEST_CASE("compare-hs")
{
    auto out = scratch() / "cmp.json";
    CHECK(run("compare-hs --demo --s 0.7 --R 0 --out " + out.string()) == 0);
    auto r = nlohmann::json::parse(slurp(out))["report"];
    double ratio = r["ratio"], expected = r["expected_ratio"];
    CHECK(std::abs(ratio / expected - 1.0) < 1e-4);
    CHECK(run("compare-hs --demo --s 1.5 --R0 --out " + out.string()) == 0);
    CHECK(run("compare-hs --demo --s 1 --out " + out.string()) == 0);
    auto whole = nlohmann::json::parse(slurp(out))["report"];
    CHECK(whole.contains("hs_sq"));
    CHECK_FALSE(whole.contains("ratio"));
}

TEST_CASE("transmission helper")
{
    auto out = scratch() / "a.csv";
    CHECK(run("transmission --demo --grid 1024 --lambda-sq 0,4 --format csv --out " + out.string()) == 0);
    CHECK(slurp(out).find("jost") != std::string::npos);
}
