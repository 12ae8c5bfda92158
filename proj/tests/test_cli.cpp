#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef DRSIM_BIN
#error "DRSIM_BIN must point at the drsim executable"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(DRSIM_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("drsim_cli_test_" + std::to_string(static_cast<unsigned>(getpid())));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("gen writes deterministic netlist files") {
    TempDir tmp;
    std::string out1 = tmp.file("a.json");
    std::string out2 = tmp.file("b.json");
    auto r1 = run_cli("gen --width 32 --composition \"sbfa*2+dbfa*15\" --cd --out " + out1);
    CHECK(r1.exit_code == 0);
    auto r2 = run_cli("gen --width 32 --composition \"sbfa*2+dbfa*15\" --cd --out " + out2);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(out1) == slurp(out2)); // byte-identical across runs
    CHECK(slurp(out1).find("\"rca32_s2d15_cd\"") != std::string::npos);
}

TEST_CASE("gen surfaces configuration errors as exit 2") {
    auto mismatch = run_cli("gen --width 3 --composition \"dbfa*2\" --out -");
    CHECK(mismatch.exit_code == 2);
    CHECK(mismatch.output.find("error") != std::string::npos);
    auto unknown_flag = run_cli("gen --width 4 --composition \"sbfa*4\" --frobnicate");
    CHECK(unknown_flag.exit_code == 2);
    auto no_source = run_cli("gen --out -");
    CHECK(no_source.exit_code == 2);
}

TEST_CASE("verify passes on generated adders and is worker-independent") {
    TempDir tmp;
    std::string nl = tmp.file("rca8.json");
    REQUIRE(run_cli("gen --width 8 --composition \"dbfa*4\" --cd --out " + nl).exit_code == 0);
    auto jobs1 = run_cli("verify --netlist " + nl + " --random 200 --seed 1 --jobs 1");
    auto jobs4 = run_cli("verify --netlist " + nl + " --random 200 --seed 1 --jobs 4");
    CHECK(jobs1.exit_code == 0);
    CHECK(jobs4.exit_code == 0);
    CHECK(jobs1.output == jobs4.output);
    CHECK(jobs1.output.find("PASS vectors=200") != std::string::npos);

    auto exhaustive = run_cli("verify --width 6 --composition \"sbfa*2+dbfa*2\" --exhaustive");
    CHECK(exhaustive.exit_code == 0);
    CHECK(exhaustive.output.find("PASS vectors=8192") != std::string::npos);
}

TEST_CASE("verify fails with a counterexample on a sabotaged netlist") {
    TempDir tmp;
    std::string nl = tmp.file("rca2.json");
    REQUIRE(run_cli("gen --width 2 --composition \"sbfa*2\" --cd --out " + nl).exit_code == 0);
    std::string text = slurp(nl);
    // swap the SUM1 rails in the port map
    std::string needle = "\"SUM1\": [\n      \"SUM1_1\",\n      \"SUM1_0\"\n    ]";
    auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, needle.size(), "\"SUM1\": [\n      \"SUM1_0\",\n      \"SUM1_1\"\n    ]");
    std::ofstream(nl, std::ios::binary) << text;
    auto r = run_cli("verify --netlist " + nl + " --exhaustive");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
    CHECK(r.output.find("reason:") != std::string::npos);
    CHECK(r.output.find("trace excerpt:") != std::string::npos);
}

TEST_CASE("sim prints a cycle report and a trace") {
    TempDir tmp;
    std::string nl = tmp.file("rca4.json");
    REQUIRE(run_cli("gen --width 4 --composition \"sbfa*4\" --cd --out " + nl).exit_code == 0);
    std::string trace = tmp.file("trace.txt");
    auto r = run_cli("sim --netlist " + nl + " --a f --b 1 --cin 0 --trace " + trace);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("sum=0x0 cout=1") != std::string::npos);
    CHECK(r.output.find("result_check=ok") != std::string::npos);
    CHECK(r.output.find("marker ValidApplied t=0") != std::string::npos);
    std::string dumped = slurp(trace);
    CHECK(dumped.find("# ValidApplied t=0") == 0);
    CHECK(dumped.find("->") != std::string::npos);
    auto again = run_cli("sim --netlist " + nl + " --a f --b 1 --cin 0 --trace " + trace);
    CHECK(again.output == r.output);
    CHECK(slurp(trace) == dumped);
}

TEST_CASE("sta reports the longest path") {
    TempDir tmp;
    std::string nl = tmp.file("rca8.json");
    REQUIRE(run_cli("gen --width 8 --composition \"sbfa*8\" --cd --out " + nl).exit_code == 0);
    auto r = run_cli("sta --netlist " + nl);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("longest_path=10") != std::string::npos); // 8 + 2 at width 8
    auto restricted = run_cli("sta --netlist " + nl + " --from CIN_1 --from CIN_0");
    CHECK(restricted.exit_code == 0);
}

TEST_CASE("check runs property suites on blocks") {
    auto sbfa = run_cli("check --block sbfa --props dsop,cover,phase,quiescence");
    CHECK(sbfa.exit_code == 0);
    CHECK(sbfa.output.find("dsop: PASS") != std::string::npos);
    CHECK(sbfa.output.find("cover: PASS") != std::string::npos);
    CHECK(sbfa.output.find("phase: PASS") != std::string::npos);
    CHECK(sbfa.output.find("quiescence: PASS") != std::string::npos);

    auto dbfa = run_cli("check --block dbfa --props indication");
    CHECK(dbfa.exit_code == 0);
    CHECK(dbfa.output.find("COUT: early early-set") != std::string::npos);
    CHECK(dbfa.output.find("early-reset") != std::string::npos);

    auto cd = run_cli("check --block cd --cd-pairs 4 --props indication");
    CHECK(cd.exit_code == 0);
    CHECK(cd.output.find("DONE: strong") != std::string::npos);

    auto unknown = run_cli("check --block sbfa --props warp");
    CHECK(unknown.exit_code == 2);
    auto not_applicable = run_cli("check --width 4 --composition \"sbfa*4\" --props dsop");
    CHECK(not_applicable.exit_code == 2);
}

TEST_CASE("report emits identical values as csv and table plus orderings") {
    auto table = run_cli("report --width 8 --compositions \"sbfa*8,dbfa*4,sbfa*2+dbfa*3\" "
                         "--random 40 --format table");
    auto csv = run_cli("report --width 8 --compositions \"sbfa*8,dbfa*4,sbfa*2+dbfa*3\" "
                       "--random 40 --format csv");
    CHECK(table.exit_code == 0);
    CHECK(csv.exit_code == 0);
    CHECK(table.output.find("# latency order:") != std::string::npos);
    CHECK(csv.output.find("# latency order:") != std::string::npos);
    // same ordering footer in both formats
    auto footer_of = [](const std::string& s) { return s.substr(s.find("# latency order:")); };
    CHECK(footer_of(table.output) == footer_of(csv.output));
    auto again = run_cli("report --width 8 --compositions \"sbfa*8,dbfa*4,sbfa*2+dbfa*3\" "
                         "--random 40 --format csv");
    CHECK(again.output == csv.output);

    auto bad = run_cli("report --width 8 --compositions \"qbfa*8\" --format csv");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("verify reads vector files") {
    TempDir tmp;
    std::string vectors = tmp.file("vec.txt");
    std::ofstream(vectors) << "# three transactions\n"
                           << "ff 01 0\n"
                           << "0 0 1\n"
                           << "a5 5a 1\n";
    auto r = run_cli("verify --width 8 --composition \"dbfa*4\" --vectors " + vectors);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS vectors=3") != std::string::npos);

    std::string bad = tmp.file("bad.txt");
    std::ofstream(bad) << "zz xx 3\n";
    auto rb = run_cli("verify --width 8 --composition \"dbfa*4\" --vectors " + bad);
    CHECK(rb.exit_code == 2);
}

TEST_CASE("model override files reach the simulator and sta") {
    TempDir tmp;
    std::string nl = tmp.file("sbfa.json");
    REQUIRE(run_cli("gen --block sbfa --out " + nl).exit_code == 0);
    std::string model = tmp.file("model.txt");
    std::ofstream(model) << "C2 delay=5 area=12\n";
    auto r = run_cli("sta --netlist " + nl + " --model " + model);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("longest_path=7") != std::string::npos); // 1 + 5 + 1
    std::ofstream(model) << "C2 delay=0 area=12\n";
    auto bad = run_cli("sta --netlist " + nl + " --model " + model);
    CHECK(bad.exit_code == 2);
}
