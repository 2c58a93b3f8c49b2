#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"
#include "ordident/distributions.hpp"
#include "ordident/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

const char* cli_bin() {
    const char* bin = std::getenv("ORDIDENT_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "ORDIDENT_BIN must point at the ordident binary");
    return bin;
}

// runs through the shell, merging stderr into the captured output
RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

RunResult run_cli(const std::string& args) { return run(std::string(cli_bin()) + " " + args); }

// one scratch directory for the whole suite run
const fs::path& scratch() {
    static const fs::path dir = [] {
        std::string tmpl = (fs::temp_directory_path() / "ordident_cli_XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        return fs::path(tmpl);
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: ", p.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    return lines;
}

void write_values(const fs::path& p, const std::vector<double>& xs) {
    std::ofstream out(p);
    for (double x : xs) out << x << "\n";
}

}  // namespace

TEST_CASE("catalog lists every identity") {
    const auto r = run_cli("catalog");
    CHECK(r.code == 0);
    CHECK(r.out.find("15 identities") != std::string::npos);
    for (const char* id : {"L6ii", "L7v", "L8i", "P3", "P4"}) {
        INFO(id);
        CHECK(r.out.find(id) != std::string::npos);
    }
}

TEST_CASE("verify: full catalog at matching bases") {
    const fs::path base = scratch() / "full";
    const auto r = run_cli("verify --identity all --n-max 4 --out " + base.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("126 instantiations") != std::string::npos);
    CHECK(r.out.find("all pass") != std::string::npos);

    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("command") == "verify");
    CHECK(doc.at("all_pass") == true);
    CHECK(doc.at("seed").is_null());
    REQUIRE(doc.at("reports").size() == 126);
    const auto& first = doc.at("reports").at(0);
    for (const char* key : {"id", "k", "m", "n", "family", "sup_cdf_distance", "quad_pass",
                            "mc", "verdict"}) {
        INFO(key);
        CHECK(first.contains(key));
    }
    CHECK(first.at("verdict") == "pass");

    const std::string csv = slurp(base.string() + ".csv");
    CHECK(csv.rfind("id,k,m,n,family,sup_dist,mc_dist,verdict\n", 0) == 0);
    CHECK(line_count(csv) == 127);  // header + one row per instantiation
}

TEST_CASE("verify: explicit instantiation, constraint and usage errors") {
    const fs::path base = scratch() / "single";
    CHECK(run_cli("verify --identity L8i --k 1 --n 2 --out " + base.string()).code == 0);

    const auto bad = run_cli("verify --identity L8i --k 2 --n 2 --out " + base.string());
    CHECK(bad.code == 2);
    CHECK(bad.out.find("error") != std::string::npos);

    CHECK(run_cli("verify --identity L9z --out " + base.string()).code == 2);
    CHECK(run_cli("verify --identity L8i --bogus-flag").code == 2);
    CHECK(run_cli("verify --identity L8i --k 1 --out " + base.string()).code == 2);  // --k needs --n
    CHECK(run_cli("totally-unknown-subcommand").code == 2);
}

TEST_CASE("verify: impostor base yields a failing verdict") {
    const fs::path base = scratch() / "impostor";
    const auto r = run_cli(
        "verify --identity L8i --n-max 3 "
        "--base '{\"family\":\"normal\",\"mu\":0.0,\"sigma\":1.8137993642342178}' --out " +
        base.string());
    CHECK(r.code == 1);
    CHECK(r.out.find("FAILURES") != std::string::npos);
    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("all_pass") == false);
    for (const auto& rep : doc.at("reports")) CHECK(rep.at("verdict") == "fail");
}

TEST_CASE("verify: seeded reruns are byte-identical") {
    const fs::path a = scratch() / "det_a";
    const fs::path b = scratch() / "det_b";
    const std::string flags = "verify --identity all --n-max 3 --seed 11 --mc-size 20000 --out ";
    CHECK(run_cli(flags + a.string()).code == 0);
    CHECK(run_cli(flags + b.string()).code == 0);
    const std::string ja = slurp(a.string() + ".json");
    CHECK(ja == slurp(b.string() + ".json"));
    CHECK(slurp(a.string() + ".csv") == slurp(b.string() + ".csv"));

    // the seeded run embeds the Monte Carlo block in each report
    const auto doc = ordered_json::parse(ja);
    CHECK(doc.at("seed") == 11);
    const auto& mc = doc.at("reports").at(0).at("mc");
    CHECK(mc.at("size") == 20000);
    CHECK(mc.at("pass") == true);
}

TEST_CASE("sample: deterministic draws, one value per line") {
    const fs::path f1 = scratch() / "s1.txt";
    const fs::path f2 = scratch() / "s2.txt";
    const std::string flags = "sample --identity L8i --k 1 --n 2 --count 500 --seed 3 --out ";
    CHECK(run_cli(flags + f1.string()).code == 0);
    CHECK(run_cli(flags + f2.string()).code == 0);
    const std::string text = slurp(f1);
    CHECK(text == slurp(f2));
    CHECK(line_count(text) == 500);
    CHECK(std::stod(text) == std::stod(text));  // first line parses as a double

    CHECK(run_cli("sample --identity L8i --k 2 --n 2 --seed 1 --out " + f1.string()).code == 2);
    CHECK(run_cli("sample --identity L8i --k 1 --n 2 --side both --seed 1").code == 2);
}

TEST_CASE("ode-check: verdicts and validation") {
    const fs::path base = scratch() / "ode";
    const auto pass = run_cli("ode-check --r 1 --theta 1 --a 1 --lambda 1 --tol 1e-10 --out " +
                              base.string());
    CHECK(pass.code == 0);
    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("pass") == true);
    CHECK(doc.at("max_residual").get<double>() < 1e-12);

    CHECK(run_cli("ode-check --r 1 --theta 1 --a 1 --lambda 1 --tol 1e-30 --out " + base.string())
              .code == 1);
    CHECK(run_cli("ode-check --a 1.5 --out " + base.string()).code == 2);
}

TEST_CASE("residual: distribution input, verdicts, and mixing-law check") {
    const fs::path base = scratch() / "res";
    // default CDF is the Pareto solution, so the residual is tiny
    CHECK(run_cli("residual --eq max-scale-mix --k 1 --n 3 --tol 1e-7 --out " + base.string())
              .code == 0);
    // an exponential CDF is far from solving the equation
    const auto fail = run_cli(
        "residual --eq max-scale-mix --k 1 --n 3 "
        "--base '{\"family\":\"exponential\",\"rate\":1.0}' --tol 1e-7 --out " +
        base.string());
    CHECK(fail.code == 1);
    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("pass") == false);
    CHECK(doc.at("max_residual").get<double>() > 1e-3);
    // the stated mixing law is checked against the equation's own
    CHECK(run_cli("residual --eq max-scale-mix --k 1 --n 3 "
                  "--mix '{\"family\":\"beta\",\"alpha\":2.0,\"beta\":2.0}' --out " +
                  base.string())
              .code == 2);
}

TEST_CASE("solve-fp: solution feeds back into the residual command") {
    const fs::path base = scratch() / "fp";
    const auto r = run_cli(
        "solve-fp --eq max-scale-mix --k 1 --n 3 --lambda 1 --points 120 --max-iter 200 "
        "--tol 1e-6 --out " +
        base.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("converged") != std::string::npos);
    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("converged") == true);
    CHECK(doc.at("trace").size() == doc.at("sweeps").get<std::size_t>());

    const std::string csv = slurp(base.string() + ".csv");
    CHECK(csv.rfind("y,F\n", 0) == 0);
    CHECK(line_count(csv) == 121);

    const fs::path res = scratch() / "fp_res";
    CHECK(run_cli("residual --eq max-scale-mix --k 1 --n 3 --grid-csv " + base.string() +
                  ".csv --tol 1e-3 --out " + res.string())
              .code == 0);

    // hitting the sweep limit is a stop, not a failure; the report records it
    const fs::path stop = scratch() / "fp_stop";
    const auto stopped = run_cli(
        "solve-fp --eq max-scale-mix --k 1 --n 3 --points 120 --max-iter 3 --tol 1e-300 "
        "--init pareto --out " +
        stop.string());
    CHECK(stopped.code == 0);
    const auto sdoc = ordered_json::parse(slurp(stop.string() + ".json"));
    CHECK(sdoc.at("converged") == false);
    CHECK(sdoc.at("sweeps") == 3);
}

TEST_CASE("relative outputs land in ORDIDENT_OUT_DIR") {
    const fs::path dir = scratch() / "outdir" / "nested";
    const auto r = run("ORDIDENT_OUT_DIR=" + dir.string() + " " + cli_bin() +
                       " ode-check --r 1 --theta 1 --a 1 --lambda 1 --out rep");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "rep.json"));

    // absolute paths ignore the variable
    const fs::path abs = scratch() / "abs_rep";
    const auto r2 = run("ORDIDENT_OUT_DIR=" + dir.string() + " " + cli_bin() +
                        " ode-check --r 1 --theta 1 --a 1 --lambda 1 --out " + abs.string());
    CHECK(r2.code == 0);
    CHECK(fs::exists(abs.string() + ".json"));
    CHECK_FALSE(fs::exists(dir / (abs.filename().string() + ".json")));
}

TEST_CASE("gof: retain, reject, and input errors") {
    using namespace ordident;
    const fs::path null_data = scratch() / "logistic.txt";
    const fs::path alt_data = scratch() / "uniform.txt";
    {
        RngStream rng(424);
        write_values(null_data, Distribution::logistic(0.0, 1.0).sample(rng, 10000));
        RngStream rng2(425);
        write_values(alt_data, Distribution::uniform01().sample(rng2, 10000));
    }

    const fs::path base = scratch() / "gof";
    const auto keep = run_cli("gof --data " + null_data.string() + " --target logistic --seed 99 --out " +
                              base.string());
    CHECK(keep.code == 0);
    CHECK(keep.out.find("retain") != std::string::npos);
    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("decision") == "retain");
    CHECK(doc.at("p_value").get<double>() > 0.05);
    CHECK(doc.at("lhs_groups") == 3333);

    const auto rej = run_cli("gof --data " + alt_data.string() + " --target logistic --seed 99 --out " +
                             base.string());
    CHECK(rej.code == 1);
    CHECK(rej.out.find("reject") != std::string::npos);

    CHECK(run_cli("gof --data " + (scratch() / "missing.txt").string() + " --seed 1").code == 2);
    const fs::path tiny = scratch() / "tiny.txt";
    write_values(tiny, {1.0, 2.0, 3.0});
    CHECK(run_cli("gof --data " + tiny.string() + " --seed 1").code == 2);
}

TEST_CASE("calibrate: seeded size summary") {
    const fs::path base = scratch() / "cal";
    const auto r = run_cli("calibrate --target logistic --seed 21 --repetitions 50 --out " +
                           base.string());
    CHECK(r.code == 0);
    const auto doc = ordered_json::parse(slurp(base.string() + ".json"));
    CHECK(doc.at("repetitions") == 50);
    CHECK(doc.at("truth") == "logistic");
    CHECK(doc.at("rejection_rate").get<double>() <= 0.2);
    CHECK(doc.at("rejections") == doc.at("rejection_rate").get<double>() * 50);

    CHECK(run_cli("calibrate --target logistic --seed 21 --repetitions 10").code == 2);
}
