#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flm/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = flm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("flm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Small function-on-function dataset written through the simulator.
    void export_dataset(const std::string& family = "function_on_function") {
        const auto r = run({"simulate", "--family", family, "--n", "25", "--r-grid", "0.5", "--seed", "3",
                            "--export-dataset", path("d")});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    fs::path dir_;
};

TEST_F(Cli, TestIsReproducibleAcrossRunsAndWorkers) {
    export_dataset();
    const std::vector<std::string> base{"test", "--x", path("d_x.csv"), "--y", path("d_y.csv"), "--seed", "7",
                                        "--b", "300", "--tau-grid", "0,0.5", "--inner-b", "50"};
    auto with_workers = [&](const char* w) {
        auto a = base;
        a.insert(a.end(), {"--workers", w});
        return run(a);
    };
    const auto a = with_workers("1");
    const auto b = with_workers("1");
    const auto c = with_workers("3");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_NE(a.out.find("\"p_value\""), std::string::npos);
    EXPECT_NE(a.out.find("\"seed\": 7"), std::string::npos);

    const auto file = run({"test", "--x", path("d_x.csv"), "--y", path("d_y.csv"), "--seed", "7", "--b", "300",
                           "--tau-grid", "0,0.5", "--inner-b", "50", "--output", path("r.json")});
    ASSERT_EQ(file.code, 0) << file.err;
    std::ifstream in(path("r.json"));
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), a.out);
}

TEST_F(Cli, ScalarResponse) {
    export_dataset("scalar_on_function");
    const auto r = run({"test", "--x", path("d_x.csv"), "--y-scalars", path("d_y.csv"), "--tau", "0.5", "--b", "200"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"p2\": 1"), std::string::npos);
}

TEST_F(Cli, MismatchedRowCountsNameBothCounts) {
    export_dataset();
    std::ofstream(path("short.csv")) << "0,1\n1,2\n2,3\n";
    const auto r = run({"test", "--x", path("d_x.csv"), "--y", path("short.csv")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("25"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("2"), std::string::npos) << r.err;
}

TEST_F(Cli, BadArguments) {
    export_dataset();
    auto r = run({"test", "--x", path("d_x.csv"), "--y", path("d_y.csv"), "--alpha", "1.5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;

    r = run({"test", "--x", path("d_x.csv"), "--y", path("d_y.csv"), "--tau", "0.2", "--tau-grid", "0,0.5"});
    EXPECT_NE(r.code, 0);

    r = run({"test", "--x", path("missing.csv"), "--y", path("d_y.csv")});
    EXPECT_EQ(r.code, 1);

    r = run({"simulate", "--family", "mixed"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("function_on_vector"), std::string::npos) << r.err;

    r = run({});
    EXPECT_NE(r.code, 0);
}

TEST_F(Cli, SimulateTable) {
    const std::vector<std::string> args{"simulate", "--n", "20", "--r-grid", "0", "--replications", "10",
                                        "--b", "100", "--tau", "0.5", "--seed", "5"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("r,rejections,reps,rate,mean_tau,seconds\n0,", 0), 0u) << a.out;
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 2);
    EXPECT_NE(a.err.find("r=0 rejections="), std::string::npos);

    std::ofstream(path("study.json")) << R"({"n": 20, "r_grid": [0], "replications": 10, "bootstrap": 100,
                                            "tau": 0.5, "seed": 5})";
    const auto c = run({"simulate", "--config", path("study.json"), "--output", path("t.csv")});
    ASSERT_EQ(c.code, 0) << c.err;
    std::ifstream in(path("t.csv"));
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), a.out);
}

TEST_F(Cli, Profile) {
    std::ofstream(path("acc.csv")) << "5,5,5,0\n0,20,20,1\n";
    const auto r = run({"profile", "--input", path("acc.csv"), "--thresholds", "1:21:10"});
    ASSERT_EQ(r.code, 0) << r.err;
    const double d = 1.0 / 1440.0;
    const std::vector<std::vector<double>> want{{1, 11, 21}, {3 * d, 0, 0}, {3 * d, 2 * d, 0}};
    std::istringstream got(r.out);
    for (const auto& row : want) {
        std::string line;
        ASSERT_TRUE(std::getline(got, line));
        std::istringstream fields(line);
        for (double w : row) {
            std::string v;
            ASSERT_TRUE(std::getline(fields, v, ','));
            EXPECT_DOUBLE_EQ(std::stod(v), w);
        }
    }
    std::ofstream(path("bad.csv")) << "5,-3\n";
    EXPECT_EQ(run({"profile", "--input", path("bad.csv")}).code, 2);
}

}  // namespace
