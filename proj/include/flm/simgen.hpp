#pragma once

// Data generators for the three regression families: Matern Gaussian-process
// predictors, a Fourier system on [0, 1], Laplace noises, the slope variants
// and dataset assembly Y = 1 + beta(X) + Z.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "flm/fpca.hpp"
#include "flm/hilbert.hpp"
#include "flm/rng.hpp"

namespace flm::sim {

enum class Family { scalar_on_function, function_on_function, function_on_vector };
enum class Variant { sparsest, sparse, dense, densest };
enum class NoiseKind { scalar_laplace, functional_laplace };

std::string_view to_string(Family f) noexcept;
std::string_view to_string(Variant v) noexcept;
std::string_view to_string(NoiseKind k) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;
std::optional<NoiseKind> parse_noise_kind(std::string_view name) noexcept;
/// Comma-separated list of accepted names, for error messages.
std::string family_names();
std::string variant_names();

struct MaternSpec {
    double nu = 1.0;
    double rho = 1.0;
    double sigma = 1.0;
    void validate() const;
};

struct SlopeSpec {
    Family family = Family::scalar_on_function;
    Variant variant = Variant::sparse;
    double r = 0.0;
    std::size_t k_trunc = 100;
    std::size_t q = 5;
    void validate() const;
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::scalar_laplace;
    std::size_t k_terms = 50;
    double decay = 1.5;
    void validate() const;
};

/// The noise each family uses unless configured otherwise.
NoiseSpec default_noise(Family family);

double matern_cov(double s, double t, const MaternSpec& spec);

/// Draws Matern paths on a fixed grid through a symmetric eigen-factor of the
/// covariance matrix (negative eigenvalues from rounding are clipped).
class GaussianProcessSampler {
public:
    GaussianProcessSampler(GridPtr grid, const MaternSpec& spec);

    /// Path i uses stream derive(seed, {i}).
    Sample sample(std::size_t n, std::uint64_t seed) const;

    const LayoutPtr& layout() const noexcept { return layout_; }

private:
    GridPtr grid_;
    LayoutPtr layout_;
    RowMatrix factor_;
};

Sample sample_gp(const GridPtr& grid, const MaternSpec& spec, std::size_t n, std::uint64_t seed);

/// Fourier system on [0, 1]: phi_1 = 1, phi_2j = sqrt2 cos(2 j pi t),
/// phi_2j+1 = sqrt2 sin(2 j pi t).
double fourier_basis(std::size_t j, double t);

std::vector<double> sample_laplace(double scale, std::size_t n, std::uint64_t seed);

enum class ScoreLaw { gaussian, laplace };

/// X = sum_j sqrt(lambda_j) xi_j phi_j with unit-variance i.i.d. scores xi_j
/// and the Fourier system phi_j evaluated on the grid.
class KarhunenLoeveSampler {
public:
    KarhunenLoeveSampler(GridPtr grid, std::vector<double> eigenvalues, ScoreLaw law);

    Sample sample(std::size_t n, std::uint64_t seed) const;
    HilbertPoint draw(rng::Stream& stream) const;

    const LayoutPtr& layout() const noexcept { return layout_; }
    /// The true eigensystem (Fourier elements on the grid).
    EigenSystem eigensystem() const;

private:
    GridPtr grid_;
    LayoutPtr layout_;
    std::vector<double> eigenvalues_;
    ScoreLaw law_;
    RowMatrix scaled_basis_;  // m x k: sqrt(lambda_j) phi_j(t_i)
};

/// The linear map X -> beta(X) for a slope family and variant, tabulated once
/// on the predictor / response grids. The signal strength r is applied on
/// every call so one operator serves a whole r grid.
class SlopeOperator {
public:
    /// x_grid is used by the two functional-predictor families; y_grid by the
    /// two functional-response families.
    SlopeOperator(const SlopeSpec& spec, GridPtr x_grid, GridPtr y_grid);

    HilbertPoint apply(const HilbertPoint& x, double r) const;
    HilbertPoint apply(const HilbertPoint& x) const { return apply(x, spec_.r); }

    const LayoutPtr& predictor_layout() const noexcept { return x_layout_; }
    const LayoutPtr& response_layout() const noexcept { return y_layout_; }

private:
    SlopeSpec spec_;
    LayoutPtr x_layout_;
    LayoutPtr y_layout_;
    RowMatrix kernel_;  // response dim x predictor dim, quadrature weights folded in
};

/// Applies the slope to a single point. Functional outputs live on x's grid
/// (function-on-function) or on the default grid (function-on-vector).
HilbertPoint apply_slope(const SlopeSpec& spec, const HilbertPoint& x);

/// 101 equispaced points on [0, 1].
GridPtr default_grid();

struct DatasetSpec {
    SlopeSpec slope;
    std::optional<NoiseSpec> noise;  // family default when empty
    MaternSpec matern;
    std::size_t grid_points = 101;
    std::size_t n = 50;
    std::uint64_t seed = 0;
    /// Seeds study-level fixed quantities (the mixing matrix A).
    std::uint64_t design_seed = 0;
};

struct Dataset {
    Sample x;
    Sample y;
};

/// Holds everything that is fixed across replications of one design (the GP
/// factor, slope tables, the function-on-vector mixing matrix) and draws
/// datasets from it.
class DatasetGenerator {
public:
    explicit DatasetGenerator(const DatasetSpec& design);

    Dataset generate(double r, std::size_t n, std::uint64_t seed) const;
    Dataset generate() const { return generate(design_.slope.r, design_.n, design_.seed); }

    /// Orthogonal A in Sigma = A diag(j^-1.5) A^T (function-on-vector only; empty otherwise).
    const Eigen::MatrixXd& mixing() const noexcept { return mixing_; }

private:
    Sample predictors(std::size_t n, std::uint64_t seed) const;
    HilbertPoint noise(rng::Stream& stream) const;

    DatasetSpec design_;
    NoiseSpec noise_;
    GridPtr grid_;
    std::optional<GaussianProcessSampler> gp_;
    std::optional<KarhunenLoeveSampler> functional_noise_;
    Eigen::MatrixXd mixing_;
    RowMatrix sigma_root_;
    LayoutPtr vector_layout_;
    LayoutPtr scalar_response_layout_;
    SlopeOperator slope_;
};

Dataset generate_dataset(const DatasetSpec& spec);

}  // namespace flm::sim
