#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "flm/bessel.hpp"
#include "flm/error.hpp"
#include "flm/simgen.hpp"

namespace {

using namespace flm;
using namespace flm::sim;

GridPtr unit_grid(std::size_t m) { return make_grid(Grid::uniform(0.0, 1.0, m)); }

HilbertPoint fourier_point(const GridPtr& g, std::size_t j) {
    std::vector<double> v;
    for (double t : g->points()) v.push_back(fourier_basis(j, t));
    return HilbertPoint::function(g, std::move(v));
}

TEST(Bessel, MatchesStandardLibraryAndTable) {
    EXPECT_NEAR(bessel_k1(1.0), 0.60190723019723457, 1e-13);
    for (double x : {1e-6, 1e-3, 0.05, 0.3, 0.9, 1.5, 1.999, 2.0, 2.001, 2.5, 4.0, 7.5, 15.0, 40.0, 300.0}) {
        const double ref = std::cyl_bessel_k(1.0, x);
        EXPECT_NEAR(bessel_k1(x), ref, 1e-10 * ref) << "x=" << x;
    }
    EXPECT_THROW(bessel_k1(0.0), DomainError);
}

TEST(Bessel, HalfIntegerClosedForms) {
    for (double nu : {0.5, 1.5, 2.5})
        for (double x : {0.1, 1.0, 3.0, 10.0}) {
            const double ref = std::cyl_bessel_k(nu, x);
            EXPECT_NEAR(bessel_k(nu, x), ref, 1e-12 * ref);
        }
}

TEST(Matern, Examples) {
    const MaternSpec unit;
    EXPECT_EQ(matern_cov(0.3, 0.3, unit), 1.0);
    const double r2 = std::sqrt(2.0);
    EXPECT_NEAR(matern_cov(0.0, 1.0, unit), r2 * std::cyl_bessel_k(1.0, r2), 1e-12);
    rng::Stream st(3);
    for (int k = 0; k < 50; ++k) {
        const double s = st.uniform(), t = st.uniform();
        EXPECT_EQ(matern_cov(s, t, unit), matern_cov(t, s, unit));
    }
    double prev = 1.0;
    for (double d = 0.01; d < 3.0; d += 0.01) {
        const double c = matern_cov(0.0, d, unit);
        EXPECT_LT(c, prev);
        prev = c;
    }
    // Continuity at zero distance.
    EXPECT_NEAR(matern_cov(0.0, 1e-9, unit), 1.0, 1e-6);
    const MaternSpec scaled{2.5, 0.5, 2.0};
    EXPECT_EQ(matern_cov(0.1, 0.1, scaled), 4.0);
    EXPECT_THROW((MaternSpec{0.0, 1.0, 1.0}.validate()), DomainError);
}

TEST(GaussianProcess, PointwiseMomentsAndCovariance) {
    const auto g = unit_grid(11);
    const MaternSpec spec;
    const std::size_t n = 10000;
    const auto s = sample_gp(g, spec, n, 42);
    ASSERT_EQ(s.size(), n);
    for (std::size_t k = 0; k < g->size(); ++k) {
        double m = 0.0, v = 0.0;
        for (const auto& x : s.elements()) m += x.coords()[k];
        m /= n;
        for (const auto& x : s.elements()) v += (x.coords()[k] - m) * (x.coords()[k] - m);
        v /= n;
        EXPECT_LT(std::abs(m), 0.04) << "t index " << k;
        EXPECT_NEAR(v, 1.0, 0.05) << "t index " << k;
    }
    // Pair (0.2, 0.8) sits at grid indices 2 and 8.
    double c = 0.0, m2 = 0.0, m8 = 0.0;
    for (const auto& x : s.elements()) {
        m2 += x.coords()[2];
        m8 += x.coords()[8];
    }
    m2 /= n;
    m8 /= n;
    for (const auto& x : s.elements()) c += (x.coords()[2] - m2) * (x.coords()[8] - m8);
    c /= n;
    EXPECT_NEAR(c, matern_cov(0.2, 0.8, spec), 0.05);
}

TEST(GaussianProcess, Deterministic) {
    const auto a = sample_gp(unit_grid(21), MaternSpec{}, 3, 5);
    const auto b = sample_gp(unit_grid(21), MaternSpec{}, 3, 5);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 21; ++k) EXPECT_EQ(a[i].coords()[k], b[i].coords()[k]);
    EXPECT_THROW(sample_gp(unit_grid(21), MaternSpec{}, 0, 5), DomainError);
}

TEST(Fourier, Values) {
    EXPECT_EQ(fourier_basis(1, 0.37), 1.0);
    EXPECT_DOUBLE_EQ(fourier_basis(2, 0.0), std::numbers::sqrt2);
    EXPECT_DOUBLE_EQ(fourier_basis(3, 0.25), std::numbers::sqrt2);
    EXPECT_NEAR(fourier_basis(4, 0.25), -std::numbers::sqrt2, 1e-15);
    EXPECT_THROW(fourier_basis(0, 0.1), DomainError);
}

TEST(Fourier, OrthonormalOnFineGrid) {
    const auto g = unit_grid(1001);
    std::vector<HilbertPoint> phi;
    for (std::size_t j = 1; j <= 50; ++j) phi.push_back(fourier_point(g, j));
    for (std::size_t j = 0; j < 50; ++j)
        for (std::size_t k = 0; k < 50; ++k)
            EXPECT_NEAR(inner_product(phi[j], phi[k]), j == k ? 1.0 : 0.0, 1e-6);
}

TEST(Laplace, Moments) {
    const auto v = sample_laplace(1.0 / std::sqrt(2.0), 1000000, 8);
    double m = 0.0, s2 = 0.0;
    for (double x : v) {
        m += x;
        s2 += x * x;
    }
    m /= v.size();
    EXPECT_NEAR(s2 / v.size() - m * m, 1.0, 0.01);
    auto sorted = v;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    EXPECT_NEAR(sorted[sorted.size() / 2], 0.0, 0.01);
    EXPECT_THROW(sample_laplace(0.0, 3, 1), DomainError);
}

TEST(Slope, ScalarOnFunctionSparsestIntegratesConstant) {
    const auto g = default_grid();
    const auto one = HilbertPoint::function(g, std::vector<double>(g->size(), 1.0));
    SlopeSpec s{Family::scalar_on_function, Variant::sparsest, 0.5};
    const auto out = apply_slope(s, one);
    ASSERT_EQ(out.layout().scalar_dim(), 1u);
    EXPECT_NEAR(out.coords()[0], 0.5, 1e-14);
}

TEST(Slope, ZeroSignalGivesZero) {
    const auto g = default_grid();
    for (auto f : {Family::scalar_on_function, Family::function_on_function})
        for (auto v : {Variant::sparsest, Variant::sparse, Variant::dense, Variant::densest}) {
            const auto out = apply_slope(SlopeSpec{f, v, 0.0}, fourier_point(g, 3));
            for (double c : out.coords()) EXPECT_EQ(c, 0.0);
        }
    const auto vec = HilbertPoint::scalars({1, 2, 3, 4, 5});
    const auto fv = apply_slope(SlopeSpec{Family::function_on_vector, Variant::dense, 0.0}, vec);
    for (double c : fv.coords()) EXPECT_EQ(c, 0.0);
}

TEST(Slope, FunctionOnFunctionSparseCoefficients) {
    const auto g = default_grid();
    const double r = 0.7;
    const auto out = apply_slope(SlopeSpec{Family::function_on_function, Variant::sparse, r}, fourier_point(g, 2));
    for (std::size_t k = 1; k <= 5; ++k) {
        const double coef = inner_product(out, fourier_point(g, k));
        const double expected = k <= 3 ? r * 2.5 * std::pow(4.0, -1.2) * std::pow(k + 2.0, -1.2) : 0.0;
        EXPECT_NEAR(coef, expected, 1e-6) << "k=" << k;
    }
}

TEST(Slope, FunctionOnFunctionMatchesDoubleQuadrature) {
    const auto g = unit_grid(41);
    const auto x = fourier_point(g, 5);
    const SlopeSpec spec{Family::function_on_function, Variant::densest, 1.0};
    const auto out = apply_slope(spec, x);
    const auto pts = g->points();
    const auto w = g->weights();
    for (std::size_t a = 0; a < pts.size(); a += 7) {
        double acc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double st = pts[i] * pts[a];
            acc += w[i] * 2.5 * st * st * std::exp(0.25 * (pts[i] + pts[a])) * x.coords()[i];
        }
        EXPECT_NEAR(out.coords()[a], acc, 1e-12);
    }
}

TEST(Slope, FunctionOnVectorSparsestIsConstantSum) {
    const auto out = apply_slope(SlopeSpec{Family::function_on_vector, Variant::sparsest, 2.0},
                                 HilbertPoint::scalars({1, -2, 0.5, 3, 1}));
    for (double c : out.coords()) EXPECT_NEAR(c, 2.0 * 1.1 * 3.5, 1e-12);
}

TEST(Slope, FamilyMismatchThrows) {
    const auto g = default_grid();
    EXPECT_THROW(apply_slope(SlopeSpec{Family::scalar_on_function, Variant::sparse, 1.0}, HilbertPoint::scalars({1})),
                 DomainError);
    EXPECT_THROW(apply_slope(SlopeSpec{Family::function_on_vector, Variant::sparse, 1.0}, fourier_point(g, 1)),
                 DomainError);
    EXPECT_THROW(apply_slope(SlopeSpec{Family::function_on_vector, Variant::sparse, 1.0}, HilbertPoint::scalars({1, 2})),
                 DomainError);
    SlopeOperator op(SlopeSpec{Family::scalar_on_function, Variant::sparse, 1.0}, g, nullptr);
    EXPECT_THROW(op.apply(fourier_point(unit_grid(51), 1)), DomainError);
    EXPECT_THROW((SlopeSpec{Family::scalar_on_function, Variant::sparse, -1.0}.validate()), DomainError);
}

TEST(FunctionalNoise, CoefficientVariances) {
    std::vector<double> lambda(50);
    for (std::size_t j = 0; j < 50; ++j) lambda[j] = std::pow(j + 1.0, -1.5);
    const auto g = unit_grid(201);
    const KarhunenLoeveSampler noise(g, lambda, ScoreLaw::laplace);
    const auto s = noise.sample(10000, 4);
    for (std::size_t j = 1; j <= 5; ++j) {
        const auto phi = fourier_point(g, j);
        double v = 0.0;
        for (const auto& z : s.elements()) {
            const double c = inner_product(z, phi);
            v += c * c;
        }
        v /= s.size();
        EXPECT_NEAR(v / lambda[j - 1], 1.0, 0.1) << "j=" << j;
    }
}

TEST(Dataset, ShapesAndFamilies) {
    for (auto f : {Family::scalar_on_function, Family::function_on_function, Family::function_on_vector}) {
        DatasetSpec d;
        d.slope.family = f;
        d.slope.r = 0.5;
        d.n = 5;
        d.seed = 3;
        const auto data = generate_dataset(d);
        EXPECT_EQ(data.x.size(), 5u);
        EXPECT_EQ(data.y.size(), 5u);
        if (f == Family::function_on_vector) EXPECT_EQ(data.x.layout().scalar_dim(), 5u);
        else EXPECT_EQ(data.x.layout().grid(0).size(), 101u);
        if (f == Family::scalar_on_function) EXPECT_EQ(data.y.layout().scalar_dim(), 1u);
        else EXPECT_EQ(data.y.layout().functional_count(), 1u);
    }
}

TEST(Dataset, ResponseMeanIsOne) {
    DatasetSpec d;
    d.slope.family = Family::scalar_on_function;
    d.slope.variant = Variant::dense;
    d.slope.r = 1.0;
    d.n = 4000;
    d.seed = 11;
    const auto data = generate_dataset(d);
    double m = 0.0;
    for (const auto& y : data.y.elements()) m += y.coords()[0];
    EXPECT_NEAR(m / d.n, 1.0, 0.1);
}

TEST(Dataset, NullResponseIgnoresPredictor) {
    DatasetSpec d;
    d.slope.family = Family::function_on_function;
    d.slope.r = 0.0;
    d.n = 4;
    d.seed = 2;
    const auto a = generate_dataset(d);
    d.matern.rho = 0.3;  // different predictors, same noise streams
    const auto b = generate_dataset(d);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.y[i].coords()[10], b.y[i].coords()[10]);
}

TEST(Dataset, MixingMatrixFixedPerStudySeed) {
    DatasetSpec d;
    d.slope.family = Family::function_on_vector;
    d.design_seed = 77;
    const DatasetGenerator a(d), b(d);
    EXPECT_EQ(a.mixing(), b.mixing());
    EXPECT_LT((a.mixing().transpose() * a.mixing() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    d.design_seed = 78;
    EXPECT_NE(DatasetGenerator(d).mixing(), a.mixing());
}

TEST(Dataset, FunctionOnVectorPredictorCovariance) {
    DatasetSpec d;
    d.slope.family = Family::function_on_vector;
    d.design_seed = 5;
    d.n = 20000;
    const DatasetGenerator gen(d);
    const auto data = gen.generate(0.0, d.n, 1);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(5, 5);
    for (const auto& x : data.x.elements()) {
        const Eigen::Map<const Eigen::VectorXd> v(x.coords().data(), 5);
        cov += v * v.transpose();
    }
    cov /= static_cast<double>(d.n);
    Eigen::VectorXd lam(5);
    for (int j = 0; j < 5; ++j) lam(j) = std::pow(j + 1.0, -1.5);
    const Eigen::MatrixXd truth = gen.mixing() * lam.asDiagonal() * gen.mixing().transpose();
    EXPECT_LT((cov - truth).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Dataset, BitwiseReproducible) {
    DatasetSpec d;
    d.slope.family = Family::function_on_function;
    d.slope.variant = Variant::dense;
    d.slope.r = 0.4;
    d.n = 6;
    d.seed = 123;
    const auto a = generate_dataset(d);
    const auto b = generate_dataset(d);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t k = 0; k < 101; ++k) {
            EXPECT_EQ(a.x[i].coords()[k], b.x[i].coords()[k]);
            EXPECT_EQ(a.y[i].coords()[k], b.y[i].coords()[k]);
        }
    }
}

TEST(Dataset, InconsistentNoiseThrows) {
    DatasetSpec d;
    d.slope.family = Family::scalar_on_function;
    d.noise = NoiseSpec{NoiseKind::functional_laplace};
    EXPECT_THROW(DatasetGenerator{d}, DomainError);
    d.slope.family = Family::function_on_function;
    d.noise = NoiseSpec{NoiseKind::scalar_laplace};
    EXPECT_THROW(DatasetGenerator{d}, DomainError);
    d.noise = NoiseSpec{NoiseKind::functional_laplace, 10, 0.5};
    EXPECT_THROW(DatasetGenerator{d}, DomainError);
}

TEST(Names, RoundTrip) {
    for (auto f : {Family::scalar_on_function, Family::function_on_function, Family::function_on_vector})
        EXPECT_EQ(parse_family(to_string(f)), f);
    for (auto v : {Variant::sparsest, Variant::sparse, Variant::dense, Variant::densest})
        EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_FALSE(parse_family("nope").has_value());
}

}  // namespace
