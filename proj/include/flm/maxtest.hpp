#pragma once

// The max-statistic test for a null slope operator.
//
// Cross-score vectors V_i collect <X_i, phi_j1> <Y_i, psi_j2> (j2 fastest).
// Their coordinate means are compared against a Gaussian bootstrap of the
// partially standardized max and min statistics.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flm/fpca.hpp"
#include "flm/hilbert.hpp"
#include "flm/tau_policy.hpp"

namespace flm {

struct CrossScoreMatrix {
    RowMatrix v;  // n x (p1 * p2)
    std::size_t p1 = 0;
    std::size_t p2 = 0;

    std::size_t p() const noexcept { return p1 * p2; }
    /// Zero-based column of the pair (j1, j2).
    std::size_t index(std::size_t j1, std::size_t j2) const noexcept { return j1 * p2 + j2; }
    std::pair<std::size_t, std::size_t> split(std::size_t j) const noexcept { return {j / p2, j % p2}; }
};

CrossScoreMatrix cross_scores(const RowMatrix& xscores, const RowMatrix& yscores);

/// Coordinate means, standard deviations and a factor F with F F^T equal to
/// the covariance (1/n normalization). The full p x p covariance is only
/// formed on request: for function-on-function data p can be ~n^2.
class Summary {
public:
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;
    RowMatrix factor;  // p x k
    std::size_t n = 0;

    std::size_t p() const noexcept { return static_cast<std::size_t>(mean.size()); }

    /// F F^T.
    Eigen::MatrixXd covariance() const;

    /// Coordinates with sd_j > 1e-12 * max_j sd_j, in increasing order.
    std::vector<std::size_t> retained() const;

    /// Summary built from given moments. The factor is diag(sd) R^{1/2} with
    /// R the correlation matrix and R^{1/2} its symmetric square root
    /// (negative eigenvalues clipped to 0). Throws NumericalError when cov is
    /// not symmetric PSD within 1e-10 relative.
    static Summary from_moments(Eigen::VectorXd mean, const Eigen::MatrixXd& cov, std::size_t n);
};

/// Column means, 1/n covariance (factor = centered rows^T / sqrt(n)), sd.
Summary summarize(const CrossScoreMatrix& cs);

struct MaxMin {
    double t_u;
    double t_l;
};

/// max / min over retained j of sqrt(n) mean_j / sd_j^tau.
MaxMin max_min_statistics(const Summary& summary, double tau);

struct BootstrapQuantiles {
    double q_m = 0.0;
    double q_l = 0.0;
    std::size_t b = 0;
    double significance = 0.05;
    std::vector<double> m_samples;  // in replicate order
    std::vector<double> l_samples;
};

/// Order statistic at ceil(prob * b) (one-based) of the given values.
double empirical_quantile(std::vector<double> values, double prob);

/// Draws b vectors S* ~ N_p(0, cov) through the summary's factor and records
/// max_j S*_j / sd_j^tau and the min over the retained coordinates. Replicate
/// r uses the stream derived from (seed, r), so the result is independent of
/// `workers`.
BootstrapQuantiles bootstrap_quantiles(const Summary& summary, double tau, std::size_t b, double significance,
                                       std::uint64_t seed, unsigned workers = 1);

struct Decision {
    bool reject = false;
    double p_value = 1.0;
};

/// Rejects iff t_u > q_m or t_l < q_l. The p-value is
/// min(1, 2 min((1 + #{M* >= t_u}) / (b + 1), (1 + #{L* <= t_l}) / (b + 1))).
Decision decide(double t_u, double t_l, const BootstrapQuantiles& quantiles);

/// p x 2 matrix of [mean_j - sd_j^tau q_m / sqrt(n), mean_j - sd_j^tau q_l / sqrt(n)].
/// Degenerate coordinates get the point interval [mean_j, mean_j].
Eigen::MatrixX2d simultaneous_intervals(const Summary& summary, double tau, const BootstrapQuantiles& quantiles);

enum class BasisChoice { empirical, fourier };

struct TestConfig {
    std::optional<std::size_t> p1;  // default: n for infinite-dimensional X, else dim X
    std::optional<std::size_t> p2;
    TauPolicy tau = TauPolicy{};
    std::size_t b = 1000;
    double significance = 0.05;
    std::uint64_t seed = 0;
    BasisChoice basis = BasisChoice::empirical;
    // Caller-supplied orthonormal sequences; override `basis` when set.
    std::optional<EigenSystem> x_basis;
    std::optional<EigenSystem> y_basis;
    unsigned workers = 1;
};

struct TestResult {
    double t_u = 0.0;
    double t_l = 0.0;
    BootstrapQuantiles quantiles;
    double tau = 0.0;
    bool reject = false;
    double p_value = 1.0;
    Eigen::MatrixX2d sci;
    double significance = 0.05;
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    std::uint64_t seed = 0;
};

/// The end-to-end procedure: center both samples, choose bases, form cross
/// scores, select tau, bootstrap, decide. Observations are first put in a
/// canonical order, so permuting the input pairs does not change the result.
TestResult run_test(const Sample& x, const Sample& y, const TestConfig& config);

}  // namespace flm
