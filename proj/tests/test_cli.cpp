#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(FREEPROB_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string spec_file(const std::string& name, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "freeprob_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p.string();
}

}  // namespace

TEST_CASE("zoo listing is valid JSON") {
    const Run r = run("zoo --json");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.is_array());
    CHECK(j.size() > 5);
}

TEST_CASE("eval matches the Cauchy closed form and is deterministic") {
    const std::string m = spec_file("cauchy.json",
                                    R"({"space":"real","kind":"closed_form","family":"cauchy","params":{"a":0,"b":1}})");
    const Run a = run("eval --measure " + m + " --transform F --z 0,1 --z 2,0.5");
    const Run b = run("eval --measure " + m + " --transform F --z 0,1 --z 2,0.5");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == "z_re,z_im,F_re,F_im\n0,1,0,2\n2,0.5,2,1.5\n");
}

TEST_CASE("Kesten-McKay indicator through the CLI") {
    const std::string m = spec_file("km.json",
                                    R"({"space":"real","kind":"closed_form","family":"kesten_mckay","params":{"t":0.5}})");
    const Run r = run("indicator --measure " + m);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["lower"].get<double>() <= 0.5);
    CHECK(j["upper"].get<double>() >= 0.5);
}

TEST_CASE("Boolean power with t = 1 returns the same spec") {
    const std::string m = spec_file("atoms.json", R"({"space":"real","kind":"atoms","atoms":[[-1.0,0.5],[1.0,0.5]]})");
    const Run r = run("power --op uplus --t 1 --measure " + m);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["measure"]["kind"] == "atoms");
}

TEST_CASE("exit codes") {
    const std::string bad = spec_file("bad.json", R"({"space":"real","kind":"atoms","atoms":[[0,1]],"colour":"red"})");
    CHECK(run("eval --measure " + bad + " --transform G --z 0,1").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("power --op uplus --measure " + bad).code == 1);
    const std::string hl = spec_file("fp.json",
                                     R"({"space":"halfline","kind":"closed_form","family":"free_poisson","params":{"lambda":1}})");
    CHECK(run("power --op utimes --t 2 --measure " + hl).code == 1);
    CHECK(run("check --check fixed-point-eq --space real").code == 0);
    CHECK(run("check --check fixed-point-eq --space real --tol 1e-300").code == 3);
}

TEST_CASE("check --json reports skipped checks") {
    const Run r = run("check --check cauchy-fixed-point --space real --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["all_pass"] == true);
    int skipped = 0;
    for (const auto& c : j["checks"]) skipped += c["status"] == "skipped";
    CHECK(skipped == static_cast<int>(j["checks"].size()) - 1);
}
