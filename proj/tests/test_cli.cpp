#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks against the installed binary: exit codes, CSV shape,
// config handling, byte determinism across process runs.

namespace {

#ifndef CB_TOOL_PATH
#error "CB_TOOL_PATH must point at the coupled-berry binary"
#endif

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string temp_path(const std::string& stem) {
    return std::string("cli_") + stem;
}

RunResult run_tool(const std::string& args, const std::string& stem) {
    const std::string out_file = temp_path(stem);
    const std::string cmd = std::string(CB_TOOL_PATH) + " " + args + " > " +
                            out_file + " 2> " + out_file + ".err";
    const int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    res.out = buf.str();
    return res;
}

} // namespace

TEST_CASE("point run prints the uncoupled value in units of pi") {
    const RunResult res =
        run_tool("point --theta 1.0471975511965976 --g 0 --branch plus", "point");
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("# coupled-berry v1\n", 0) == 0);
    // data row: gamma_ab column holds -1 (units of pi)
    std::istringstream in(res.out);
    std::string line, data;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line.rfind("g,", 0) != 0) data = line;
    CHECK(data.substr(0, data.find(',')) == "0");
    CHECK(data.find(",plus,-1,") != std::string::npos);
}

TEST_CASE("degenerate branch point exits with code 3") {
    const RunResult res =
        run_tool("point --theta 1.0471975511965976 --g 0 --branch zero", "deg3");
    CHECK(res.exit_code == 3);
}

TEST_CASE("near-pole root crossing exits with code 4") {
    const RunResult res =
        run_tool("point --theta 1e-12 --g 0.5 --branch plus", "deg4");
    CHECK(res.exit_code == 4);
}

TEST_CASE("too-fast sweep with the ode oracle exits with code 5") {
    const RunResult res = run_tool(
        "point --theta 1.0471975511965976 --g 1 --branch plus --oracle ode "
        "--period 5 --ode-steps 50000",
        "adia5");
    CHECK(res.exit_code == 5);
}

TEST_CASE("usage errors exit with code 64") {
    CHECK(run_tool("point --theta 0 --g 1", "u1").exit_code == 64);
    CHECK(run_tool("point --no-such-flag 1", "u2").exit_code == 64);
    CHECK(run_tool("frobnicate", "u3").exit_code == 64);
    CHECK(run_tool("point --g-range 5:1:10", "u4").exit_code == 64);
}

TEST_CASE("sweep output is byte-identical across runs and honors --out") {
    const std::string args =
        "sweep-g --theta 0.9 --g-range 0:2:21 --branch plus --out ";
    CHECK(run_tool(args + temp_path("s1.csv"), "s1").exit_code == 0);
    CHECK(run_tool(args + temp_path("s2.csv"), "s2").exit_code == 0);
    std::ifstream a(temp_path("s1.csv"), std::ios::binary);
    std::ifstream b(temp_path("s2.csv"), std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
}

TEST_CASE("transition sweep runs end to end") {
    const RunResult res = run_tool(
        "transition-sweep --g-range 0:2:3 --branch plus --panels 2048", "trans");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("quadrature") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags override") {
    {
        std::ofstream cfg(temp_path("cfg"));
        cfg << "# sweep defaults\n"
            << "theta=0.9\n"
            << "branch=plus\n"
            << "g=1.5\n";
    }
    const RunResult base =
        run_tool("point --config " + temp_path("cfg"), "cfg_base");
    CHECK(base.exit_code == 0);
    CHECK(base.out.find("g=1.5") != std::string::npos);

    const RunResult over =
        run_tool("point --config " + temp_path("cfg") + " --g 2", "cfg_over");
    CHECK(over.exit_code == 0);
    CHECK(over.out.find("g=2") != std::string::npos);

    const RunResult bad = run_tool("point --config no_such_file", "cfg_bad");
    CHECK(bad.exit_code == 64);
}
