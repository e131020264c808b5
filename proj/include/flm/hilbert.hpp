#pragma once

// Elements of the predictor / response spaces: grid functions (L2 on an
// interval, discretized), Euclidean vectors, and direct sums of both.
//
// A point stores its coordinates flat: the values of each functional
// component in order, then the scalar part. The layout carries the matching
// flat quadrature weights (trapezoid for grid values, 1 for scalars) so that
// every inner product is a single weighted dot product.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace flm {

/// Strictly increasing abscissae with trapezoid quadrature weights.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    /// m equispaced points on [a, b].
    static Grid uniform(double a, double b, std::size_t m);

    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return points_.size(); }
    double front() const noexcept { return points_.front(); }
    double back() const noexcept { return points_.back(); }

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.points_ == b.points_; }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(Grid grid);

/// Shape of a Hilbert point: which grids, how many scalars.
class Layout {
public:
    Layout(std::vector<GridPtr> grids, std::size_t scalar_dim);

    std::size_t dim() const noexcept { return weights_.size(); }
    std::size_t functional_count() const noexcept { return grids_.size(); }
    std::size_t scalar_dim() const noexcept { return scalar_dim_; }
    const Grid& grid(std::size_t k) const { return *grids_.at(k); }
    const GridPtr& grid_ptr(std::size_t k) const { return grids_.at(k); }
    std::size_t offset(std::size_t k) const { return offsets_.at(k); }
    std::size_t scalar_offset() const noexcept { return offsets_.back(); }
    std::span<const double> weights() const noexcept { return weights_; }

    /// True when the space has an L2 component (infinite dimension).
    bool infinite_dimensional() const noexcept { return !grids_.empty(); }

    bool conformable(const Layout& other) const noexcept;

private:
    std::vector<GridPtr> grids_;
    std::size_t scalar_dim_;
    std::vector<std::size_t> offsets_;  // functional_count() + 1 entries
    std::vector<double> weights_;
};

using LayoutPtr = std::shared_ptr<const Layout>;

LayoutPtr make_layout(std::vector<GridPtr> grids, std::size_t scalar_dim);

class HilbertPoint {
public:
    HilbertPoint(LayoutPtr layout, std::vector<double> coords);

    static HilbertPoint function(GridPtr grid, std::vector<double> values);
    static HilbertPoint scalars(std::vector<double> values);
    static HilbertPoint zero(LayoutPtr layout);

    const Layout& layout() const noexcept { return *layout_; }
    const LayoutPtr& layout_ptr() const noexcept { return layout_; }

    std::span<const double> coords() const noexcept { return coords_; }
    std::span<double> coords() noexcept { return coords_; }
    std::span<const double> functional_part(std::size_t k) const;
    std::span<const double> scalar_part() const noexcept;

    HilbertPoint& operator+=(const HilbertPoint& other);
    HilbertPoint& operator-=(const HilbertPoint& other);
    HilbertPoint& operator*=(double c) noexcept;

    friend HilbertPoint operator+(HilbertPoint a, const HilbertPoint& b) { return a += b; }
    friend HilbertPoint operator-(HilbertPoint a, const HilbertPoint& b) { return a -= b; }
    friend HilbertPoint operator*(double c, HilbertPoint a) { return a *= c; }

private:
    LayoutPtr layout_;
    std::vector<double> coords_;
};

/// Throws ConformabilityError unless the two points share a layout.
void require_conformable(const HilbertPoint& a, const HilbertPoint& b);

/// Direct-sum inner product: trapezoid quadrature on each functional part
/// plus the Euclidean product of the scalar parts.
double inner_product(const HilbertPoint& a, const HilbertPoint& b);

double norm(const HilbertPoint& a);

/// Concatenates the components of a and b into a point of the direct sum.
HilbertPoint direct_sum(const HilbertPoint& a, const HilbertPoint& b);

/// n conformable points, optionally centered (with the subtracted mean kept).
class Sample {
public:
    explicit Sample(std::vector<HilbertPoint> elements);

    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    const HilbertPoint& operator[](std::size_t i) const { return elements_.at(i); }
    const std::vector<HilbertPoint>& elements() const noexcept { return elements_; }
    const Layout& layout() const;
    const LayoutPtr& layout_ptr() const;

    bool centered() const noexcept { return mean_.has_value(); }
    /// The mean that was subtracted; present iff centered().
    const std::optional<HilbertPoint>& mean() const noexcept { return mean_; }

    /// Row-major n x dim copy of all coordinates.
    std::vector<double> coordinate_matrix() const;

    friend Sample center(const Sample& sample);

private:
    std::vector<HilbertPoint> elements_;
    std::optional<HilbertPoint> mean_;
};

/// Subtracts the pointwise mean from every element. Idempotent: a sample
/// that is already centered is returned unchanged.
Sample center(const Sample& sample);

/// Element-wise direct sum of two samples of equal size.
Sample direct_sum(const Sample& a, const Sample& b);

}  // namespace flm
