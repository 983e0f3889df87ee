#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifdef KEPLERKIT_CLI_PATH
constexpr const char* kCli = KEPLERKIT_CLI_PATH;
#else
constexpr const char* kCli = "";
#endif

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string tmp = std::string("/tmp/keplerkit_cli_test_out.txt");
    const std::string cmd = std::string(kCli) + " " + args + " > " + tmp + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(rc);
    std::ifstream is(tmp);
    std::stringstream ss;
    ss << is.rdbuf();
    res.out = ss.str();
    return res;
}

} // namespace

TEST_CASE("classify prints the class and exits cleanly") {
    if (std::string(kCli).empty()) return;
    auto r = run("classify --omega 1 --energy -0.375");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "CompactS3\n");
    CHECK(run("classify --omega 1 --energy -0.6").out == "Empty\n");
}

TEST_CASE("usage errors exit with code 2") {
    if (std::string(kCli).empty()) return;
    CHECK(run("classify --omega notanumber").exit_code == 2);
    CHECK(run("unknown-subcommand").exit_code == 2);
    CHECK(run("").exit_code == 2);
    CHECK(run("functionals --format bogus").exit_code == 2);
    CHECK(run("orbit --eps 1.5").exit_code == 2);
}

TEST_CASE("computation errors exit with code 1") {
    if (std::string(kCli).empty()) return;
    // non-compact parameters are a computation-domain failure, not usage
    CHECK(run("functionals --system ellipsoid --omega 1 --energy 0.25").exit_code == 1);
}

TEST_CASE("reports are deterministic") {
    if (std::string(kCli).empty()) return;
    const std::string args = "functionals --system ellipsoid --omega 1 --energy -0.375 --eps 0.001";
    auto a = run(args);
    auto b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"schema\": 1") != std::string::npos);
    CHECK(a.out.find("\"v_tilde\"") != std::string::npos);
}

TEST_CASE("criteria JSON carries the verdict") {
    if (std::string(kCli).empty()) return;
    auto r = run("criteria --system ellipsoid --omega 1 --energy -0.375");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("InfinitelyMany_via_ii") != std::string::npos);
    CHECK(r.out.find("\"crosscheck_pass\": true") != std::string::npos);
}

TEST_CASE("sweep emits the CSV contract") {
    if (std::string(kCli).empty()) return;
    auto r = run("sweep --system ellipsoid --format csv --energy-range -0.4:-0.3:3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("omega,h,e,V,A,T,E,D,lhs,rhs,verdict,stability\n", 0) == 0);
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 4);

    auto rp = run("sweep --system pyramid --n-list 2,3 --format csv");
    CHECK(rp.out.rfind("omega,h,e,n,V,A,T,E,D,lhs,rhs,verdict,stability\n", 0) == 0);
}

TEST_CASE("config file values are overridden by flags") {
    if (std::string(kCli).empty()) return;
    {
        std::ofstream cfg("/tmp/keplerkit_cli_test_cfg.ini");
        cfg << "omega=1.0\nenergy=-0.6\n";
    }
    auto file_only = run("classify --config /tmp/keplerkit_cli_test_cfg.ini");
    CHECK(file_only.out == "Empty\n");
    auto overridden = run("classify --config /tmp/keplerkit_cli_test_cfg.ini --energy -0.375");
    CHECK(overridden.out == "CompactS3\n");
}

TEST_CASE("out files are written for both formats") {
    if (std::string(kCli).empty()) return;
    std::remove("/tmp/keplerkit_cli_base.json");
    std::remove("/tmp/keplerkit_cli_base.csv");
    auto r = run("brake --system ellipsoid --eps 0.001 --out /tmp/keplerkit_cli_base --format both");
    CHECK(r.exit_code == 0);
    std::ifstream j("/tmp/keplerkit_cli_base.json");
    std::ifstream c("/tmp/keplerkit_cli_base.csv");
    CHECK(j.good());
    CHECK(c.good());
    std::string header;
    std::getline(c, header);
    CHECK(header == "t,p_r,p_z,r,z");
}
