#include "flm/fpca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "flm/error.hpp"
#include "flm/kernels.hpp"
#include "flm/parallel.hpp"

namespace flm {

namespace {

constexpr double kRankCutoff = 1e-12;

void fix_sign(std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
        if (std::abs(v[k]) > std::abs(v[best])) best = k;
    if (!v.empty() && v[best] < 0.0)
        for (double& x : v) x = -x;
}

double fourier_value(std::size_t j, double u) {
    if (j == 1) return 1.0;
    const double freq = static_cast<double>(j / 2);
    const double arg = 2.0 * std::numbers::pi * freq * u;
    return std::numbers::sqrt2 * ((j % 2 == 0) ? std::cos(arg) : std::sin(arg));
}

}  // namespace

EigenSystem empirical_eigensystem(const Sample& centered, std::size_t max_components, unsigned workers) {
    if (centered.size() < 2)
        throw DomainError("empirical eigensystem needs n >= 2, got " + std::to_string(centered.size()));
    if (!centered.centered()) throw DomainError("empirical eigensystem expects a centered sample");
    if (max_components == 0) throw DomainError("max_components must be >= 1");

    const std::size_t n = centered.size();
    const Layout& layout = centered.layout();
    const std::size_t d = layout.dim();
    const std::vector<double> x = centered.coordinate_matrix();
    const double* w = layout.weights().data();
    const auto& kt = kernels::active();

    Eigen::MatrixXd gram(n, n);
    const double inv_n = 1.0 / static_cast<double>(n);
    parallel_for(n, workers, [&](std::size_t i) {
        for (std::size_t l = i; l < n; ++l) {
            const double g = kt.weighted_dot(x.data() + i * d, x.data() + l * d, w, d) * inv_n;
            gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = g;
            gram(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)) = g;
        }
    });

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw NumericalError("Gram eigendecomposition failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
    const Eigen::MatrixXd& evecs = solver.eigenvectors();

    EigenSystem out;
    const double lambda1 = std::max(0.0, evals(static_cast<Eigen::Index>(n - 1)));
    if (!(lambda1 > 0.0)) return out;

    // A centered sample has rank <= n - 1.
    const std::size_t limit = std::min(max_components, n - 1);
    for (std::size_t r = 0; r < limit; ++r) {
        const auto col = static_cast<Eigen::Index>(n - 1 - r);
        const double lambda = evals(col);
        if (!(lambda > kRankCutoff * lambda1)) break;
        const double scale = 1.0 / std::sqrt(static_cast<double>(n) * lambda);
        std::vector<double> phi(d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double c = evecs(static_cast<Eigen::Index>(i), col) * scale;
            const double* xi = x.data() + i * d;
            for (std::size_t k = 0; k < d; ++k) phi[k] += c * xi[k];
        }
        fix_sign(phi);
        out.eigenvalues.push_back(lambda);
        out.eigenelements.emplace_back(centered.layout_ptr(), std::move(phi));
    }
    return out;
}

RowMatrix project_scores(const Sample& sample, const EigenSystem& basis) {
    const std::size_t n = sample.size();
    const std::size_t p = basis.count();
    RowMatrix scores(n, p);
    if (n == 0 || p == 0) return scores;
    const Layout& layout = sample.layout();
    if (!layout.conformable(basis.eigenelements.front().layout()))
        throw ConformabilityError("sample is not conformable with the basis elements");
    const auto& kt = kernels::active();
    const double* w = layout.weights().data();
    const std::size_t d = layout.dim();
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = sample[i].coords().data();
        for (std::size_t j = 0; j < p; ++j)
            scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                kt.weighted_dot(xi, basis.eigenelements[j].coords().data(), w, d);
    }
    return scores;
}

std::size_t fourier_capacity(std::size_t grid_points) noexcept {
    if (grid_points < 2) return 0;
    return 2 * ((grid_points - 2) / 2) + 1;
}

EigenSystem fixed_basis(const LayoutPtr& layout, std::size_t count) {
    if (!layout) throw DomainError("null layout");
    const std::size_t q = layout->scalar_dim();
    const std::size_t nf = layout->functional_count();
    if (nf == 0 && count > q)
        throw DomainError("standard basis of R^" + std::to_string(q) + " has no " + std::to_string(count) +
                          " elements");

    EigenSystem out;
    const std::size_t d = layout->dim();
    for (std::size_t j = 0; j < std::min(count, q); ++j) {
        std::vector<double> e(d, 0.0);
        e[layout->scalar_offset() + j] = 1.0;
        out.eigenelements.emplace_back(layout, std::move(e));
    }
    for (std::size_t index = 1; out.count() < count; ++index) {
        for (std::size_t k = 0; k < nf && out.count() < count; ++k) {
            const Grid& g = layout->grid(k);
            const double a = g.front();
            const double len = g.back() - a;
            const double norm = 1.0 / std::sqrt(len);
            std::vector<double> e(d, 0.0);
            const std::size_t off = layout->offset(k);
            for (std::size_t m = 0; m < g.size(); ++m)
                e[off + m] = norm * fourier_value(index, (g.points()[m] - a) / len);
            out.eigenelements.emplace_back(layout, std::move(e));
        }
    }
    return out;
}

void align_signs(EigenSystem& estimate, const EigenSystem& reference) {
    const std::size_t p = std::min(estimate.count(), reference.count());
    for (std::size_t j = 0; j < p; ++j) {
        if (inner_product(estimate.eigenelements[j], reference.eigenelements[j]) < 0.0)
            estimate.eigenelements[j] *= -1.0;
    }
}

namespace {

Eigen::MatrixXd cross_gram(const EigenSystem& a, const EigenSystem& b) {
    const auto p = static_cast<Eigen::Index>(a.count());
    Eigen::MatrixXd u(p, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index k = 0; k < p; ++k)
            u(j, k) = inner_product(a.eigenelements[static_cast<std::size_t>(j)],
                                    b.eigenelements[static_cast<std::size_t>(k)]);
    return u;
}

}  // namespace

AlignmentReport alignment_report(BasisPair basis_a, BasisPair basis_b) {
    if (basis_a.x.count() != basis_b.x.count() || basis_a.y.count() != basis_b.y.count())
        throw DomainError("alignment needs matching counts: p1 " + std::to_string(basis_a.x.count()) + " vs " +
                          std::to_string(basis_b.x.count()) + ", p2 " + std::to_string(basis_a.y.count()) + " vs " +
                          std::to_string(basis_b.y.count()));
    AlignmentReport rep;
    rep.u_x = cross_gram(basis_a.x, basis_b.x);
    rep.u_y = cross_gram(basis_a.y, basis_b.y);
    const Eigen::Index p1 = rep.u_x.rows();
    const Eigen::Index p2 = rep.u_y.rows();
    if (p1 == 0 || p2 == 0) return rep;

    // Entry ((j1,j2),(k1,k2)) of W is u_x(j1,k1) * u_y(j2,k2).
    const double max_abs_y = rep.u_y.cwiseAbs().maxCoeff();
    double max_off_y = 0.0;
    for (Eigen::Index j = 0; j < p2; ++j)
        for (Eigen::Index k = 0; k < p2; ++k)
            if (j != k) max_off_y = std::max(max_off_y, std::abs(rep.u_y(j, k)));

    double dev = 0.0;
    for (Eigen::Index j1 = 0; j1 < p1; ++j1) {
        for (Eigen::Index k1 = 0; k1 < p1; ++k1) {
            const double a = rep.u_x(j1, k1);
            if (j1 != k1) {
                dev = std::max(dev, std::abs(a) * max_abs_y);
                continue;
            }
            dev = std::max(dev, std::abs(a) * max_off_y);
            for (Eigen::Index j2 = 0; j2 < p2; ++j2) dev = std::max(dev, std::abs(a * rep.u_y(j2, j2) - 1.0));
        }
    }
    rep.w_max_dev = dev;
    return rep;
}

}  // namespace flm
