#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "farmsched_cli_test";

int run_cli(const std::string& args) {
    std::string cmd = std::string(FARMSCHED_BIN) + " " + args;
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

struct ScratchDir {
    ScratchDir() {
        fs::remove_all(kScratch);
        fs::create_directories(kScratch);
    }
};

const std::string kSmallConfig =
    "[engine]\n"
    "n_farmlets = 2\n"
    "dsps_per_farmlet = 3\n"
    "ticks = 300\n"
    "error_rate = 0.05\n"
    "[sweep]\n"
    "d_values = 0.01, 0.3, 2.0\n"
    "error_rates = 0.001, 0.1\n";

} // namespace

TEST_CASE("check accepts the empty default config") {
    CHECK(run_cli("check > /dev/null 2>&1") == 0);
}

TEST_CASE("validation failures exit with status 1 and name the key") {
    ScratchDir scratch;
    auto err = kScratch / "err.txt";
    CHECK(run_cli("run --ticks 0 --quiet 2> " + err.string()) == 1);
    CHECK(slurp(err).find("[engine].ticks") != std::string::npos);

    write_file(kScratch / "bad.cfg", "[engine]\nerror_rate = 2\n");
    CHECK(run_cli("check --config " + (kScratch / "bad.cfg").string() +
                  " 2> /dev/null") == 1);

    CHECK(run_cli("run --no-such-flag > /dev/null 2>&1") == 1);
}

TEST_CASE("a missing config file is a config error") {
    CHECK(run_cli("check --config /nonexistent.cfg 2> /dev/null") == 1);
}

TEST_CASE("runtime failures exit with status 2") {
    // /proc is not writable, so creating the output directory fails at run
    // time rather than at validation
    CHECK(run_cli("sweep --ticks 1 --quiet --out /proc/farmsched_nope "
                  "2> /dev/null") == 2);
}

TEST_CASE("run emits a per-tick trace on request") {
    ScratchDir scratch;
    auto trace = kScratch / "trace.csv";
    CHECK(run_cli("run --ticks 50 --quiet --trace " + trace.string()) == 0);
    std::string text = slurp(trace);
    CHECK(text.rfind("tick,farmlet,dsp,task,watermark,staleness,"
                     "active_fault_count,processed\n", 0) == 0);
    // 50 ticks x 50 DSPs data rows plus the header
    long rows = -1;
    for (char c : text)
        if (c == '\n') ++rows;
    CHECK(rows == 50 * 50);
}

TEST_CASE("sweep output is byte-identical across parallelism and reruns") {
    ScratchDir scratch;
    write_file(kScratch / "sweep.cfg", kSmallConfig);
    std::string base = "sweep --config " + (kScratch / "sweep.cfg").string() +
                       " --quiet --out ";
    auto out1 = kScratch / "p1";
    auto out4 = kScratch / "p4";
    auto out1b = kScratch / "p1b";
    REQUIRE(run_cli(base + out1.string() + " --parallel 1") == 0);
    REQUIRE(run_cli(base + out4.string() + " --parallel 4") == 0);
    REQUIRE(run_cli(base + out1b.string() + " --parallel 1") == 0);

    CHECK(slurp(out1 / "sweep_cells.csv") == slurp(out4 / "sweep_cells.csv"));
    CHECK(slurp(out1 / "sweep_optimum.csv") ==
          slurp(out4 / "sweep_optimum.csv"));
    CHECK(slurp(out1 / "sweep_cells.csv") == slurp(out1b / "sweep_cells.csv"));
    CHECK(slurp(out1 / "sweep_optimum.csv") ==
          slurp(out1b / "sweep_optimum.csv"));
}

TEST_CASE("quiet silences the summary but never the artifacts") {
    ScratchDir scratch;
    write_file(kScratch / "sweep.cfg", kSmallConfig);
    auto out_loud = kScratch / "loud";
    auto out_quiet = kScratch / "quiet";
    auto stdout_loud = kScratch / "loud.txt";
    auto stdout_quiet = kScratch / "quiet.txt";
    REQUIRE(run_cli("sweep --config " + (kScratch / "sweep.cfg").string() +
                    " --out " + out_loud.string() + " > " +
                    stdout_loud.string()) == 0);
    REQUIRE(run_cli("sweep --config " + (kScratch / "sweep.cfg").string() +
                    " --quiet --out " + out_quiet.string() + " > " +
                    stdout_quiet.string()) == 0);
    CHECK(!slurp(stdout_loud).empty());
    CHECK(slurp(stdout_quiet).empty());
    CHECK(slurp(out_loud / "sweep_cells.csv") ==
          slurp(out_quiet / "sweep_cells.csv"));
    CHECK(slurp(out_loud / "sweep_optimum.csv") ==
          slurp(out_quiet / "sweep_optimum.csv"));
}

TEST_CASE("seed and d overrides change the run") {
    ScratchDir scratch;
    auto a = kScratch / "a.txt";
    auto b = kScratch / "b.txt";
    auto c = kScratch / "c.txt";
    REQUIRE(run_cli("run --ticks 200 --error-rate 0.2 --seed 11 22 > " +
                    a.string()) == 0);
    REQUIRE(run_cli("run --ticks 200 --error-rate 0.2 --seed 11 23 > " +
                    b.string()) == 0);
    REQUIRE(run_cli("run --ticks 200 --error-rate 0.2 --seed 11 22 > " +
                    c.string()) == 0);
    CHECK(slurp(a) != slurp(b));
    CHECK(slurp(a) == slurp(c));
}
