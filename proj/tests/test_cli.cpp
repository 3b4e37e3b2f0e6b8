#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path dir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / "kreiss_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return d;
}

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir() / name;
    std::ofstream(p) << text;
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + KREISS_CLI + "\" " + args + " >\"" + (dir() / "stdout").string() +
                            "\" 2>\"" + (dir() / "stderr").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out() {
    std::ifstream f(dir() / "stdout");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string err() {
    std::ifstream f(dir() / "stderr");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

nlohmann::json report() { return nlohmann::json::parse(out()); }

} // namespace

TEST_CASE("analyze the zero matrix") {
    const auto p = write("zero.mtx", "%%MatrixMarket matrix array real general\n2 2\n0\n0\n0\n0\n");
    REQUIRE(run("analyze " + p.string()) == 0);
    const auto j = report();
    CHECK(j["schema"] == "kreissometer/1");
    CHECK(j["functionals"]["sup_semigroup_norm"]["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["functionals"]["kreiss_constant_continuous"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(j["functionals"]["calK_continuous"]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("analyze a nilpotent block") {
    const auto p = write("nil.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n");
    REQUIRE(run("analyze --certify " + p.string()) == 0);
    const auto j = report();
    CHECK(j["verdict"]["stable"] == false);
    CHECK(j["functionals"]["calK_continuous"]["diverged"] == true);
    CHECK(j["functionals"]["sup_semigroup_norm"]["diverged"] == true);
}

TEST_CASE("discrete analysis") {
    const auto p = write("half.mtx", "%%MatrixMarket matrix array real general\n1 1\n0.5\n");
    REQUIRE(run("analyze --discrete " + p.string()) == 0);
    CHECK(report()["functionals"]["sup_power_norm"]["value"] == 1.0);
    REQUIRE(run("analyze --mode discrete " + p.string()) == 0);
    CHECK(report()["mode"] == "discrete");
}

TEST_CASE("grid output shape") {
    const auto p = write("m1.mtx", "%%MatrixMarket matrix array real general\n1 1\n-1\n");
    REQUIRE(run("grid --grid 3 " + p.string()) == 0);
    std::istringstream in(out());
    std::string line;
    std::getline(in, line);
    CHECK(line == "re,im,resolvent_norm,ratio,flag");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 9);
}

TEST_CASE("region output") {
    const auto p = write("m2.mtx", "%%MatrixMarket matrix array real general\n2 2\n-1\n0\n3\n-2\n");
    REQUIRE(run("region --r 1 --grid 5 " + p.string()) == 0);
    std::istringstream in(out());
    std::string line;
    std::getline(in, line);
    CHECK(line == "re,im,region_value,member,resolvent_norm,bound,holds");
    int rows = 0, held = 0;
    while (std::getline(in, line)) {
        ++rows;
        held += line.size() >= 2 && line.substr(line.size() - 2) == ",1";
        CHECK(line.substr(line.size() - 2) != ",0");
    }
    CHECK(rows == 25);
    CHECK(held > 0);
}

TEST_CASE("family and cauchy subcommands") {
    REQUIRE(run("family --kind normal-stable --count 5 --seed 1") == 0);
    const auto j = report();
    CHECK(j["report"]["member_count"] == 5);
    CHECK(j["report"]["uniformity"] == "uniform");
    REQUIRE(run("cauchy --scalar -1 --y-count 20001 --table-count 11") == 0);
    CHECK(out().rfind("y,true_norm,old_env,new_env\n", 0) == 0);
}

TEST_CASE("exit codes") {
    const auto bad = write("bad.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\nzz\n3\n4\n");
    CHECK(run("analyze " + bad.string()) == 2);
    CHECK(err().find("bad.mtx:4:1") != std::string::npos);
    const auto rect = write("rect.mtx", "%%MatrixMarket matrix array real general\n2 3\n");
    CHECK(run("analyze " + rect.string()) == 2);
    CHECK(run("analyze " + (dir() / "missing.mtx").string()) == 4);
    CHECK(run("analyze") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("family --kind nope") == 1);
    const auto m1 = write("m3.mtx", "%%MatrixMarket matrix array real general\n1 1\n-1\n");
    CHECK(run("cauchy --gamma -2 " + m1.string()) == 1);
    CHECK(run("analyze " + m1.string() + " --out /nonexistent/dir/x.json") == 4);
}
