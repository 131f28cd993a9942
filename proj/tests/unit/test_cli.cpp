#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfreq/cli.hpp"

using namespace pfreq;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "pfreq");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

std::filesystem::path scratch_dir(const char* name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configuration errors exit with 2") {
    CHECK(run({"solve", "--q", "2.5"}).code == kExitConfig);
    CHECK(run({"solve", "--q", "abc"}).code == kExitConfig);
    CHECK(run({"solve", "--h", "1/64,1/32"}).code == kExitConfig);
    CHECK(run({"solve", "--domain", "file:/nonexistent.dom"}).code == kExitConfig);
    CHECK(run({"solve", "--domain", "hexagon:r=1"}).code == kExitConfig);
    CHECK(run({"solve", "--format", "xml"}).code == kExitConfig);
    CHECK(run({"frobnicate"}).code == kExitConfig);
    const Run r = run({"dual", "--q", "-1"});
    CHECK(r.code == kExitConfig);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("malformed domain file") {
    const auto dir = scratch_dir("pfreq_cli_bad");
    const auto path = dir / "bad.dom";
    std::ofstream(path) << "h 1/8\nnx 3\nny 3\norigin 0 0\nconvex 1\n000\n0?0\n000\n";
    CHECK(run({"dual", "--domain", "file:" + path.string()}).code == kExitConfig);
}

TEST_CASE("help prints usage and succeeds") {
    const Run r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("solve") != std::string::npos);
}

TEST_CASE("solve emits one record per (q, h)") {
    const Run r = run({"solve", "--domain", "rect:w=1,h=1", "--q", "1,2", "--h", "1/16,1/32"});
    CHECK(r.code == kExitOk);
    CHECK(count_lines(r.out) == 4);
    CHECK(r.out.find("\"q_text\":\"1\"") != std::string::npos);
    CHECK(r.out.find("\"h_text\":\"1/32\"") != std::string::npos);
}

TEST_CASE("constants over a grid") {
    const Run r = run({"constants", "--q-grid", "1:2:0.05"});
    CHECK(r.code == kExitOk);
    CHECK(count_lines(r.out) == 21);
    CHECK(r.out.find("\"pi_2q\"") != std::string::npos);
}

TEST_CASE("conjugate check passes") {
    const Run r = run({"conjugate-check", "--q", "1.5", "--samples", "10"});
    CHECK(r.code == kExitOk);
    CHECK(count_lines(r.out) == 1);
    CHECK(r.out.find("max_rel_error_closed") != std::string::npos);
}

TEST_CASE("csv output carries a single header") {
    const Run r = run({"constants", "--q", "1,1.5,2", "--format", "csv"});
    CHECK(r.code == kExitOk);
    CHECK(count_lines(r.out) == 4);
    CHECK(r.out.find("pi_2q") < r.out.find('\n'));
}

TEST_CASE("identical configuration reproduces identical bytes") {
    const std::vector<std::string> args{"dual", "--domain", "rect:w=1,h=1", "--q", "1.5", "--h", "1/16,1/32",
                                        "--seed", "5"};
    const Run a = run(args), b = run(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"record\":\"sweep\"") != std::string::npos);
}

TEST_CASE("bounds on the L-shape gate convex rows") {
    const Run r = run({"bounds", "--domain", "poly:0,0;2,0;2,1;1,1;1,2;0,2", "--q", "1.5", "--h", "1/16"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("\"applicable\":false") != std::string::npos);
}

TEST_CASE("output file and output directory") {
    const auto dir = scratch_dir("pfreq_cli_out");
    const auto file = dir / "c.jsonl";
    std::filesystem::remove(file);
    Run r = run({"constants", "--q", "2", "--out", file.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    CHECK(std::filesystem::file_size(file) > 0);

    std::filesystem::remove(dir / "constants.csv");
    ::setenv("PFREQ_OUT_DIR", dir.c_str(), 1);
    r = run({"constants", "--q", "2", "--format", "csv"});
    ::unsetenv("PFREQ_OUT_DIR");
    CHECK(r.code == kExitOk);
    CHECK(std::filesystem::exists(dir / "constants.csv"));

    CHECK(run({"constants", "--out", "/nonexistent/dir/x.jsonl"}).code == kExitConfig);
}

}  // TEST_SUITE cli
