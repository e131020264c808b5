#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "flm/error.hpp"
#include "flm/io.hpp"
#include "flm/rng.hpp"
#include "flm/simgen.hpp"

namespace {

using namespace flm;

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("flm_io_" + name);
}

void expect_same(const Sample& a, const Sample& b) {
    ASSERT_EQ(a.size(), b.size());
    ASSERT_TRUE(a.layout().conformable(b.layout()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a.layout().dim(); ++k) EXPECT_EQ(a[i].coords()[k], b[i].coords()[k]);
}

Sample awkward_functional() {
    const auto g = make_grid(Grid({0.0, 1.0 / 3.0, 0.7, 1.0}));
    rng::Stream st(3);
    std::vector<HilbertPoint> pts;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> v(4);
        st.fill_normal(v);
        v[0] *= 1e-300;
        v[1] *= 1e200;
        pts.push_back(HilbertPoint::function(g, v));
    }
    return Sample(pts);
}

TEST(Io, FunctionalCsvRoundTripIsExact) {
    const auto s = awkward_functional();
    std::ostringstream os;
    io::write_sample_csv(s, os);
    expect_same(s, io::parse_functional_csv(os.str()));
}

TEST(Io, ScalarCsvRoundTripIsExact) {
    std::vector<HilbertPoint> pts;
    rng::Stream st(4);
    for (int i = 0; i < 7; ++i) pts.push_back(HilbertPoint::scalars({st.normal(), st.normal() * 1e-7, -0.1}));
    const Sample s(pts);
    std::ostringstream os;
    io::write_sample_csv(s, os);
    expect_same(s, io::parse_scalar_csv(os.str()));
}

TEST(Io, JsonRoundTripWithDirectSum) {
    const auto f = awkward_functional();
    std::vector<HilbertPoint> sc;
    for (int i = 0; i < 5; ++i) sc.push_back(HilbertPoint::scalars({i * 0.1, 1.0 / (i + 1)}));
    const auto s = direct_sum(f, Sample(sc));
    std::ostringstream os;
    io::write_sample_json(s, os);
    expect_same(s, io::parse_sample_json(os.str()));
}

TEST(Io, FileRoundTripAndCombination) {
    sim::DatasetSpec d;
    d.n = 8;
    d.seed = 4;
    const auto data = sim::generate_dataset(d);
    const auto xp = temp_file("x.csv");
    const auto sp = temp_file("s.csv");
    io::write_sample(data.x, xp);
    io::write_sample(data.y, sp);
    expect_same(data.x, io::read_sample(xp, std::nullopt));
    expect_same(data.y, io::read_sample(std::nullopt, sp));
    const auto both = io::read_sample(xp, sp);
    EXPECT_EQ(both.layout().scalar_dim(), 1u);
    EXPECT_EQ(both.layout().functional_count(), 1u);
    const auto jp = temp_file("x.json");
    io::write_sample(data.x, jp);
    expect_same(data.x, io::read_sample(jp, std::nullopt));
    std::filesystem::remove(xp);
    std::filesystem::remove(sp);
    std::filesystem::remove(jp);
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

TEST(Io, DiagnosticsNameLines) {
    EXPECT_NE(error_of([] { io::parse_functional_csv("0,0.5,1\n1,2,3\n4,five,6\n", "x.csv"); }).find("x.csv:3"),
              std::string::npos);
    EXPECT_NE(error_of([] { io::parse_functional_csv("0,0.5,1\n1,2\n", "x.csv"); }).find("x.csv:2"),
              std::string::npos);
    EXPECT_NE(error_of([] { io::parse_functional_csv("0,0,1\n1,2,3\n", "x.csv"); }).find("x.csv:1"),
              std::string::npos);
    EXPECT_NE(error_of([] { io::parse_scalar_csv("1,2\n3\n", "s.csv"); }).find("s.csv:2"), std::string::npos);
    EXPECT_NE(error_of([] { io::parse_functional_csv("0,1\n1,nan\n", "x.csv"); }).find("non-finite"),
              std::string::npos);
    EXPECT_FALSE(error_of([] { io::parse_functional_csv("", "e.csv"); }).empty());
    EXPECT_FALSE(error_of([] { io::parse_functional_csv("0,1\n", "e.csv"); }).empty());
    EXPECT_FALSE(error_of([] { io::parse_sample_json(R"({"grid":[0,1],"rows":[[1]]})"); }).empty());
    EXPECT_FALSE(error_of([] { io::parse_sample_json(R"({"rows":[[1]]})"); }).empty());
    EXPECT_FALSE(error_of([] { io::parse_sample_json(R"({"grid":[0,1],"rows":[[1,2]],"extra":1})"); }).empty());
}

TEST(Io, MismatchedCountsNameBoth) {
    const auto xp = temp_file("mx.csv");
    const auto sp = temp_file("ms.csv");
    {
        std::ofstream(xp) << "0,1\n1,2\n3,4\n";
        std::ofstream(sp) << "1\n2\n3\n";
    }
    const auto msg = error_of([&] { io::read_sample(xp, sp); });
    EXPECT_NE(msg.find("2 observations"), std::string::npos);
    EXPECT_NE(msg.find("3"), std::string::npos);
    std::filesystem::remove(xp);
    std::filesystem::remove(sp);
    EXPECT_THROW(io::read_sample(std::filesystem::path("/nonexistent/x.csv"), std::nullopt), IoError);
}

TEST(Io, TestResultJsonFieldOrder) {
    TestResult r;
    r.t_u = 1.5;
    r.t_l = -0.25;
    r.quantiles.q_m = 2.0;
    r.quantiles.q_l = -2.0;
    r.quantiles.b = 100;
    r.tau = 0.3;
    r.p_value = 0.5;
    r.sci = Eigen::MatrixX2d(1, 2);
    r.sci << -0.1, 0.2;
    r.p1 = 1;
    r.p2 = 1;
    r.seed = 7;
    const auto j = io::test_result_json(r);
    const char* keys[] = {"\"t_u\"", "\"t_l\"", "\"q_m\"", "\"q_l\"", "\"tau\"", "\"p_value\"", "\"reject\"",
                          "\"sci\"", "\"p1\"", "\"p2\"", "\"b\"", "\"significance\"", "\"seed\""};
    std::size_t pos = 0;
    for (const char* k : keys) {
        const auto at = j.find(k);
        ASSERT_NE(at, std::string::npos) << k;
        EXPECT_GT(at, pos) << k;
        pos = at;
    }
}

TEST(Io, EigensystemExport) {
    const auto layout = make_layout({make_grid(Grid::uniform(0, 1, 3))}, 1);
    EigenSystem es;
    es.eigenvalues = {2.0};
    es.eigenelements.push_back(HilbertPoint(layout, {1, 0, 0, 0}));
    std::ostringstream os;
    io::write_eigensystem_csv(es, os);
    EXPECT_EQ(os.str(), "eigenvalue,f0:0,f0:0.5,f0:1,s0\n2,1,0,0,0\n");
}

}  // namespace
