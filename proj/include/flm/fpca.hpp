#pragma once

// Empirical covariance operators and their eigenelements, score projection,
// fixed orthonormal bases, and the basis-alignment diagnostic.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "flm/hilbert.hpp"

namespace flm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Orthonormal elements with (for empirical systems) their eigenvalues in
/// non-increasing order. Fixed bases carry no eigenvalues.
struct EigenSystem {
    std::vector<double> eigenvalues;
    std::vector<HilbertPoint> eigenelements;

    std::size_t count() const noexcept { return eigenelements.size(); }
    bool empty() const noexcept { return eigenelements.empty(); }
};

/// Leading eigenpairs of the sample covariance operator n^-1 sum X_i (x) X_i,
/// computed through the n x n Gram matrix G = n^-1 <X_i, X_l>.
///
/// Eigenvalues below 1e-12 * lambda_1 are dropped, so the count is
/// min(max_components, numerical rank). Each eigenelement is sign-fixed so
/// that its largest-magnitude coordinate (flat order, earliest on ties) is
/// positive. The sample must be centered and have n >= 2. Gram assembly may
/// use `workers` threads; the result does not depend on that number.
EigenSystem empirical_eigensystem(const Sample& centered, std::size_t max_components, unsigned workers = 1);

/// n x count matrix of <X_i, e_j>.
RowMatrix project_scores(const Sample& sample, const EigenSystem& basis);

/// First `count` elements of the Fourier system 1, sqrt2 cos(2 pi k u), sqrt2 sin(2 pi k u)
/// (u the position rescaled to [0, 1], normalized to unit L2 norm on the
/// grid's interval) for a single functional component, the standard basis
/// for a scalar-only layout. For direct sums the scalar unit vectors come
/// first, then the functional components' Fourier elements round-robin.
EigenSystem fixed_basis(const LayoutPtr& layout, std::size_t count);

/// Number of Fourier elements that stay orthonormal under trapezoid
/// quadrature on a uniform grid of m points (frequencies below (m-1)/2).
std::size_t fourier_capacity(std::size_t grid_points) noexcept;

/// Flips each estimated eigenelement whose inner product with the matching
/// reference element is negative. Eigenelements are identified only up to sign.
void align_signs(EigenSystem& estimate, const EigenSystem& reference);

struct AlignmentReport {
    Eigen::MatrixXd u_x;  // <phi_j, phi~_k>
    Eigen::MatrixXd u_y;  // <psi_j, psi~_k>
    double w_max_dev = 0.0;  // || U_x (x) U_y - I ||_max
};

struct BasisPair {
    const EigenSystem& x;
    const EigenSystem& y;
};

/// Alignment of basis_b against basis_a. The Kronecker product is never
/// materialized; cost is O(p1^2 + p2^2 + p1 p2).
AlignmentReport alignment_report(BasisPair basis_a, BasisPair basis_b);

}  // namespace flm
