// End-to-end checks of the CLI binary: exit-code contract, report files,
// determinism of seeded runs. The binary path arrives as argv[1].

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_binary;
int g_tmp_counter = 0;

int run(const std::string& args) {
    const int rc = std::system((g_binary + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string tmp_path(const std::string& suffix) {
    return "/tmp/dilat_cli_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(g_tmp_counter++) + suffix;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json load_without_wall(const std::string& path) {
    auto j = nlohmann::json::parse(slurp(path));
    j.erase("wall_ms");
    return j;
}

}  // namespace

TEST_CASE("exit-code contract") {
    CHECK(run("audit --structure euclidean:2 --samples 10") == 0);
    CHECK(run("audit --structure rotating:0.5 --samples 10") == 0);
    // Degenerate fixture: checks fail -> 1.
    CHECK(run("audit --structure broken:2 --samples 10") == 1);
    // Unknown names and bad usage -> 2.
    CHECK(run("audit --structure nosuch") == 2);
    CHECK(run("curve --structure euclidean:2 --curve nosuch --op var") == 2);
    CHECK(run("curve --structure euclidean:2 --curve segment --op bogus") == 2);
    CHECK(run("bogus-subcommand") == 2);
    // The expected negative finding: a rotating segment is underivable.
    CHECK(run("curve --structure rotating:0.5 --curve segment --op rn --samples 30") == 1);
}

TEST_CASE("reports are valid JSON with the stable schema") {
    const std::string out = tmp_path(".json");
    REQUIRE(run("audit --structure heisenberg --samples 10 --out " + out) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["artifact"] == "dilat");
    CHECK(j["all_pass"] == true);
    CHECK(j.contains("wall_ms"));
    REQUIRE(j["sections"].is_array());
    REQUIRE(!j["sections"].empty());
    for (const auto& rec : j["sections"][0]["records"]) {
        CHECK(rec.contains("name"));
        CHECK(rec.contains("status"));
        CHECK(rec.contains("residual"));
        CHECK(rec.contains("witness"));
    }
    std::remove(out.c_str());
}

TEST_CASE("failing runs carry at least one witness record") {
    const std::string out = tmp_path(".json");
    REQUIRE(run("audit --structure broken:2 --samples 10 --out " + out) == 1);
    auto j = nlohmann::json::parse(slurp(out));
    bool witnessed = false;
    for (const auto& sec : j["sections"])
        for (const auto& rec : sec["records"])
            if (rec["status"] != "pass" && !rec["witness"].get<std::string>().empty())
                witnessed = true;
    CHECK(witnessed);
    std::remove(out.c_str());
}

TEST_CASE("seeded runs are byte-identical apart from the wall clock") {
    const std::string o1 = tmp_path(".json"), o2 = tmp_path(".json");
    REQUIRE(run("audit --structure heisenberg --samples 15 --seed 99 --out " + o1) == 0);
    REQUIRE(run("audit --structure heisenberg --samples 15 --seed 99 --out " + o2) == 0);
    CHECK(load_without_wall(o1).dump() == load_without_wall(o2).dump());
    REQUIRE(run("audit --structure heisenberg --samples 15 --seed 100 --out " + o2) == 0);
    CHECK(load_without_wall(o1).dump() != load_without_wall(o2).dump());
    std::remove(o1.c_str());
    std::remove(o2.c_str());
}

TEST_CASE("csv traces have headers and rows") {
    const std::string csv = tmp_path(".csv");
    REQUIRE(run("tangent --structure euclidean:2 --samples 2 --steps 8 --tol 0.1 --csv " +
                csv) == 0);
    std::ifstream in(csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "x0,x1,u0,u1,v0,v1,eps,value0,value1,residual,status");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 * 8);  // one row per (sample, eps)
    std::remove(csv.c_str());

    const std::string gap = tmp_path(".csv");
    REQUIRE(run("lookdown --pair heisenberg-euclidean --op gap --x 0,0,0 --z 1,0,0.5 "
                "--steps 8 --csv " + gap) == 0);
    std::ifstream gin(gap);
    REQUIRE(std::getline(gin, header));
    CHECK(header == "eps,gap,vertical");
    std::remove(gap.c_str());
}

TEST_CASE("lookdown and diff subcommands run end to end") {
    CHECK(run("lookdown --pair heisenberg-euclidean --op audit --samples 15") == 0);
    CHECK(run("lookdown --pair euclidean-heisenberg --op audit --samples 15") == 1);
    CHECK(run("lookdown --pair nosuch --op audit") == 2);
    CHECK(run("diff --structure euclidean:2 --map identity --op derive --samples 3") == 0);
    CHECK(run("diff --structure rotating:0.5 --map conjugate --op derive --samples 3") == 1);
    CHECK(run("diff --structure euclidean:2 --map nosuch --op derive") == 2);
    CHECK(run("curve --structure euclidean:2 --curve circle --op var") == 0);
}

TEST_CASE("config file supplies defaults that flags override") {
    const std::string cfg = tmp_path(".conf");
    {
        std::ofstream out(cfg);
        out << "structure=broken:2\nsamples=10\n";
    }
    CHECK(run("audit --config " + cfg) == 1);
    CHECK(run("audit --config " + cfg + " --structure euclidean:2") == 0);
    std::remove(cfg.c_str());
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-dilat-binary>\n");
        return 2;
    }
    g_binary = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
