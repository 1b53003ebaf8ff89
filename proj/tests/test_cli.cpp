#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fdsketch/row_stream.hpp"
#include "fdsketch/sketch_io.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("fdsketch_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    CliResult run(const std::string& args) const {
        const std::string out = path("stdout.txt");
        const std::string cmd = std::string(FDSKETCH_CLI) + " " + args + " > " + out + " 2> " + path("stderr.txt");
        const int raw = std::system(cmd.c_str());
        CliResult r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        std::ifstream in(out);
        std::stringstream ss;
        ss << in.rdbuf();
        r.out = ss.str();
        return r;
    }

    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SketchThreeRowsGivesTwoRowSketch) {
    write("a.csv", "1,0\n0,1\n1,0\n");
    const CliResult r = run("sketch --input " + path("a.csv") + " --k 1 --eps 1 --out " + path("a.fdsk"));
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["ell"], 2);
    EXPECT_EQ(j["rows"], 3);
    EXPECT_NEAR(j["delta"].get<double>(), 1.0, 1e-14);
    EXPECT_EQ(j["input_frob_sq"].get<double>(), 3.0);
    EXPECT_EQ(fdsketch::load_sketch(path("a.fdsk")).params().ell, 2u);
}

TEST_F(Cli, SketchThenVerifyPasses) {
    fdsketch::save_rows(path("a.csv"), fdtest::random_matrix(120, 8, 1), fdsketch::RowFormat::csv);
    ASSERT_EQ(run("sketch --input " + path("a.csv") + " --k 2 --eps 0.5 --c 2 --out " + path("a.fdsk")).status, 0);
    const CliResult r = run("verify --input " + path("a.csv") + " --sketch " + path("a.fdsk"));
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out)["all_pass"].get<bool>());
}

TEST_F(Cli, EmptyInputGivesEmptySketch) {
    write("empty.csv", "");
    const CliResult r = run("sketch --input " + path("empty.csv") + " --k 1 --eps 1 --d 3 --out " + path("e.fdsk"));
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["delta"].get<double>(), 0.0);
    const auto s = fdsketch::load_sketch(path("e.fdsk"));
    EXPECT_EQ(s.rows_seen(), 0u);
    EXPECT_TRUE(s.query().is_zero());
}

TEST_F(Cli, MalformedRowExitsTwoWithLineNumber) {
    write("bad.csv", "1,2\n3,oops\n");
    const CliResult r = run("sketch --input " + path("bad.csv") + " --k 1 --eps 1 --out " + path("b.fdsk"));
    EXPECT_EQ(r.status, 2);
    std::ifstream err(path("stderr.txt"));
    std::stringstream ss;
    ss << err.rdbuf();
    EXPECT_NE(ss.str().find("line 2"), std::string::npos);
}

TEST_F(Cli, MissingFileExitsThree) {
    EXPECT_EQ(run("sketch --input " + path("nope.csv") + " --k 1 --eps 1 --out " + path("x.fdsk")).status, 3);
    write("a.csv", "1,2\n");
    EXPECT_EQ(run("sketch --input " + path("a.csv") + " --k 1 --eps 1 --out /nonexistent/dir/x.fdsk").status, 3);
}

TEST_F(Cli, BadArgumentsExitTwo) {
    EXPECT_EQ(run("sketch --k 1").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
}

TEST_F(Cli, MergeHalvesAndEmpty) {
    const auto a = fdtest::random_matrix(100, 6, 4);
    fdsketch::save_rows(path("all.csv"), a, fdsketch::RowFormat::csv);
    fdsketch::save_rows(path("h1.bin"), a.row_block(0, 50), fdsketch::RowFormat::binary);
    fdsketch::save_rows(path("h2.bin"), a.row_block(50, 100), fdsketch::RowFormat::binary);
    write("empty.csv", "");
    const std::string opts = " --k 2 --eps 0.5 --out ";
    ASSERT_EQ(run("sketch --input " + path("h1.bin") + opts + path("h1.fdsk")).status, 0);
    ASSERT_EQ(run("sketch --input " + path("h2.bin") + opts + path("h2.fdsk")).status, 0);
    ASSERT_EQ(run("sketch --input " + path("all.csv") + opts + path("all.fdsk")).status, 0);
    ASSERT_EQ(run("sketch --input " + path("empty.csv") + " --d 6" + opts + path("e.fdsk")).status, 0);

    CliResult r = run("merge " + path("h1.fdsk") + " " + path("h2.fdsk") + " --out " + path("m.fdsk"));
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["rows"], 100);
    EXPECT_EQ(run("verify --input " + path("all.csv") + " --sketch " + path("m.fdsk")).status, 0);

    ASSERT_EQ(run("merge " + path("all.fdsk") + " " + path("e.fdsk") + " --out " + path("m2.fdsk")).status, 0);
    EXPECT_EQ(run("verify --input " + path("all.csv") + " --sketch " + path("m2.fdsk")).status, 0);
}

TEST_F(Cli, MergeMismatchedWidthExitsTwo) {
    write("a.csv", "1,2\n");
    write("b.csv", "1,2,3\n");
    ASSERT_EQ(run("sketch --input " + path("a.csv") + " --k 1 --eps 1 --out " + path("a.fdsk")).status, 0);
    ASSERT_EQ(run("sketch --input " + path("b.csv") + " --k 1 --eps 1 --out " + path("b.fdsk")).status, 0);
    EXPECT_EQ(run("merge " + path("a.fdsk") + " " + path("b.fdsk") + " --out " + path("m.fdsk")).status, 2);
}

TEST_F(Cli, VerifyCatchesForeignSketch) {
    fdsketch::save_rows(path("a.csv"), fdtest::random_matrix(60, 5, 1), fdsketch::RowFormat::csv);
    fdsketch::save_rows(path("b.csv"), fdtest::random_matrix(60, 5, 2), fdsketch::RowFormat::csv);
    ASSERT_EQ(run("sketch --input " + path("b.csv") + " --k 1 --eps 0.5 --out " + path("b.fdsk")).status, 0);
    EXPECT_EQ(run("verify --input " + path("a.csv") + " --sketch " + path("b.fdsk")).status, 1);
    write("garbage.fdsk", "not a sketch");
    EXPECT_EQ(run("verify --input " + path("a.csv") + " --sketch " + path("garbage.fdsk")).status, 2);
}

TEST_F(Cli, HeavyHitters) {
    write("items.txt", "1\n2\n1\n3\n1\n1\n");
    const CliResult r = run("hh --input " + path("items.txt") + " --k 1 --eps 0.5");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["ell"], 3);
    EXPECT_EQ(j["top"][0]["item"], 1);
    EXPECT_TRUE(j["certificate"]["all_ok"].get<bool>());
    write("bad.txt", "1\n-2\n");
    EXPECT_EQ(run("hh --input " + path("bad.txt") + " --k 1 --eps 0.5").status, 2);
}

TEST_F(Cli, AdversaryReport) {
    const CliResult r = run("adversary --k 1 --d 2 --n 100 --eps 1 --format binary --out " + path("adv.bin") + " --json " +
                      path("adv.json"));
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["ipca_err"].get<double>(), 2475.0, 1e-9);
    EXPECT_LE(j["fd_ratio"].get<double>(), 2.0);
    EXPECT_EQ(fdsketch::load_rows(path("adv.bin")).rows(), 100u);
    EXPECT_TRUE(fs::exists(path("adv.json")));
}

TEST_F(Cli, NoSparseFdReport) {
    const CliResult r = run("no-sparse-fd --ell 4 --c 1");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["declared"]["joint_points"].get<double>(), 0.0);
    EXPECT_EQ(j["measured"]["joint_points"].get<double>(), 0.0);
    EXPECT_NEAR(j["residual_min"]["value"].get<double>(), 1.25, 1e-12);
}
