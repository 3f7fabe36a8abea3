#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("airy_ids_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    const fs::path o = scratch_dir() / "stdout.txt", e = scratch_dir() / "stderr.txt";
    std::string cmd = std::string("\"") + AIRY_IDS_BINARY + "\" " + args + " >\"" + o.string() + "\" 2>\"" + e.string() + "\"";
    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST(Cli, BandsCsv) {
    auto r = run_cli("bands --c 10 --p-max 3");
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "p,y_max,y_min,e_min,e_max,center_offset");
    EXPECT_EQ(ls[1].rfind("0,-1.0187929716474712292784784568", 0), 0u) << ls[1];
    EXPECT_EQ(ls[4].rfind("3,-4.087949445284351804812089650", 0), 0u) << ls[4];
}

TEST(Cli, JsonMetaAndDeterminism) {
    auto a = run_cli("bands --c 10 --p-max 1 --format json");
    auto b = run_cli("bands --c 10 --p-max 1 --format json");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["meta"]["tool"], "airy_ids");
    EXPECT_EQ(j["meta"]["config_hash"].get<std::string>().size(), 16u);
    EXPECT_EQ(j["rows"].size(), 2u);
    auto other = nlohmann::json::parse(run_cli("bands --c 11 --p-max 1 --format json").out);
    EXPECT_NE(j["meta"]["config_hash"], other["meta"]["config_hash"]);
}

TEST(Cli, ConfigFileAndPrecedence) {
    fs::path cfg = scratch_dir() / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "# bands for c = 10\nc = 10\np_max = 2\nformat = csv\n";
    }
    auto r = run_cli("bands --config \"" + cfg.string() + "\"");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 4u);
    auto flag = run_cli("bands --config \"" + cfg.string() + "\" --p-max 0");
    ASSERT_EQ(flag.code, 0) << flag.err;
    EXPECT_EQ(lines(flag.out).size(), 2u);
    {
        std::ofstream f(cfg);
        f << "c = 10\nwidth = 3\n";
    }
    auto bad = run_cli("bands --config \"" + cfg.string() + "\"");
    EXPECT_EQ(bad.code, 2);
    auto j = nlohmann::json::parse(bad.err);
    EXPECT_EQ(j["error"], "config");
}

TEST(Cli, ConfigErrors) {
    EXPECT_EQ(run_cli("bands --c 10 --tol bogus=1").code, 2);
    EXPECT_EQ(run_cli("bands --c ten").code, 2);
    EXPECT_EQ(run_cli("bands --c 10 --format xml").code, 2);
    EXPECT_EQ(run_cli("spectrum --c 10 --parity three").code, 2);
    EXPECT_EQ(run_cli("bands --config /nonexistent/file.cfg").code, 2);
    EXPECT_NE(run_cli("").code, 0);
}

TEST(Cli, PreconditionExit) {
    auto r = run_cli("spectrum --c 3 --p-max 2");
    EXPECT_EQ(r.code, 3);
    auto j = nlohmann::json::parse(r.err);
    EXPECT_EQ(j["error"], "precondition");
    EXPECT_EQ(j["exit_code"], 3);
    EXPECT_EQ(run_cli("bands --c 1").code, 3);
}

TEST(Cli, AtomicOutputFile) {
    fs::path out = scratch_dir() / "bands.csv";
    fs::remove(out);
    auto r = run_cli("bands --c 10 --p-max 1 --out \"" + out.string() + "\"");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(lines(slurp(out)).size(), 3u);
    for (const auto& entry : fs::directory_iterator(scratch_dir())) {
        EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos) << entry.path();
    }
    // A failing run leaves the previous file untouched.
    std::string before = slurp(out);
    EXPECT_EQ(run_cli("bands --c 1 --out \"" + out.string() + "\"").code, 3);
    EXPECT_EQ(slurp(out), before);
}

TEST(Cli, VerifyLemma) {
    auto r = run_cli("verify --c 10 --suite lemma-h --p-max 2 --tol lemma_samples=200 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["suite"], "lemma-h");
    EXPECT_EQ(j["pass"], true);
    EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(Cli, SpectrumCounts) {
    auto r = run_cli("spectrum --c 10 --n 1 --p-max 1 --tol gap_samples=50");
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_FALSE(ls.empty());
    EXPECT_EQ(ls[0], "p,k,y,e");
    int rows = 0;
    for (std::size_t i = 1; i < ls.size(); ++i) rows += ls[i].empty() ? 0 : 1;
    EXPECT_EQ(rows, 8);
}

TEST(Cli, IdsCurve) {
    auto r = run_cli("ids --c 10 --grid 5 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["rows"].size(), 5u);
    EXPECT_EQ(j["rows"][0]["ids_formula"], "0");
    EXPECT_EQ(j["rows"][2]["p"], "5");
}

TEST(Cli, OracleMonodromy) {
    auto r = run_cli("oracle --c 10 --method monodromy --p-max 1");
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "p,value,residual");
    EXPECT_EQ(run_cli("oracle --c 10 --method magic").code, 2);
}
