#include "flm/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flm/error.hpp"
#include "flm/kernels.hpp"

namespace flm {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    const std::size_t m = points_.size();
    if (m < 2) throw DomainError("grid needs at least 2 points, got " + std::to_string(m));
    for (std::size_t k = 0; k < m; ++k) {
        if (!std::isfinite(points_[k])) throw DomainError("grid point " + std::to_string(k) + " is not finite");
        if (k > 0 && !(points_[k] > points_[k - 1]))
            throw DomainError("grid points must be strictly increasing (index " + std::to_string(k) + ")");
    }
    weights_.resize(m);
    weights_[0] = 0.5 * (points_[1] - points_[0]);
    for (std::size_t k = 1; k + 1 < m; ++k) weights_[k] = 0.5 * (points_[k + 1] - points_[k - 1]);
    weights_[m - 1] = 0.5 * (points_[m - 1] - points_[m - 2]);
}

Grid Grid::uniform(double a, double b, std::size_t m) {
    if (m < 2) throw DomainError("uniform grid needs at least 2 points");
    if (!(b > a)) throw DomainError("uniform grid needs a < b");
    std::vector<double> pts(m);
    const double span = b - a;
    for (std::size_t k = 0; k < m; ++k) pts[k] = a + span * static_cast<double>(k) / static_cast<double>(m - 1);
    pts.back() = b;
    return Grid(std::move(pts));
}

GridPtr make_grid(Grid grid) { return std::make_shared<const Grid>(std::move(grid)); }

Layout::Layout(std::vector<GridPtr> grids, std::size_t scalar_dim)
    : grids_(std::move(grids)), scalar_dim_(scalar_dim) {
    if (grids_.empty() && scalar_dim_ == 0)
        throw DomainError("a Hilbert point needs at least one functional or scalar component");
    offsets_.reserve(grids_.size() + 1);
    std::size_t off = 0;
    for (const auto& g : grids_) {
        if (!g) throw DomainError("null grid in layout");
        offsets_.push_back(off);
        weights_.insert(weights_.end(), g->weights().begin(), g->weights().end());
        off += g->size();
    }
    offsets_.push_back(off);
    weights_.resize(off + scalar_dim_, 1.0);
}

bool Layout::conformable(const Layout& other) const noexcept {
    if (this == &other) return true;
    if (scalar_dim_ != other.scalar_dim_ || grids_.size() != other.grids_.size()) return false;
    for (std::size_t k = 0; k < grids_.size(); ++k) {
        if (grids_[k] != other.grids_[k] && !(*grids_[k] == *other.grids_[k])) return false;
    }
    return true;
}

LayoutPtr make_layout(std::vector<GridPtr> grids, std::size_t scalar_dim) {
    return std::make_shared<const Layout>(std::move(grids), scalar_dim);
}

HilbertPoint::HilbertPoint(LayoutPtr layout, std::vector<double> coords)
    : layout_(std::move(layout)), coords_(std::move(coords)) {
    if (!layout_) throw DomainError("null layout");
    if (coords_.size() != layout_->dim())
        throw ConformabilityError("point has " + std::to_string(coords_.size()) + " coordinates, layout expects " +
                                  std::to_string(layout_->dim()));
}

HilbertPoint HilbertPoint::function(GridPtr grid, std::vector<double> values) {
    return HilbertPoint(make_layout({std::move(grid)}, 0), std::move(values));
}

HilbertPoint HilbertPoint::scalars(std::vector<double> values) {
    const std::size_t q = values.size();
    return HilbertPoint(make_layout({}, q), std::move(values));
}

HilbertPoint HilbertPoint::zero(LayoutPtr layout) {
    const std::size_t d = layout->dim();
    return HilbertPoint(std::move(layout), std::vector<double>(d, 0.0));
}

std::span<const double> HilbertPoint::functional_part(std::size_t k) const {
    const std::size_t off = layout_->offset(k);
    return std::span<const double>(coords_).subspan(off, layout_->grid(k).size());
}

std::span<const double> HilbertPoint::scalar_part() const noexcept {
    return std::span<const double>(coords_).subspan(layout_->scalar_offset());
}

HilbertPoint& HilbertPoint::operator+=(const HilbertPoint& other) {
    require_conformable(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

HilbertPoint& HilbertPoint::operator-=(const HilbertPoint& other) {
    require_conformable(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

HilbertPoint& HilbertPoint::operator*=(double c) noexcept {
    for (double& v : coords_) v *= c;
    return *this;
}

void require_conformable(const HilbertPoint& a, const HilbertPoint& b) {
    if (!a.layout().conformable(b.layout())) throw ConformabilityError("Hilbert points are not conformable");
}

double inner_product(const HilbertPoint& a, const HilbertPoint& b) {
    require_conformable(a, b);
    return kernels::active().weighted_dot(a.coords().data(), b.coords().data(), a.layout().weights().data(),
                                          a.layout().dim());
}

double norm(const HilbertPoint& a) { return std::sqrt(std::max(0.0, inner_product(a, a))); }

HilbertPoint direct_sum(const HilbertPoint& a, const HilbertPoint& b) {
    const Layout& la = a.layout();
    const Layout& lb = b.layout();
    std::vector<GridPtr> grids;
    for (std::size_t k = 0; k < la.functional_count(); ++k) grids.push_back(la.grid_ptr(k));
    for (std::size_t k = 0; k < lb.functional_count(); ++k) grids.push_back(lb.grid_ptr(k));
    std::vector<double> coords;
    coords.reserve(la.dim() + lb.dim());
    const auto af = a.coords().first(la.scalar_offset());
    const auto bf = b.coords().first(lb.scalar_offset());
    coords.insert(coords.end(), af.begin(), af.end());
    coords.insert(coords.end(), bf.begin(), bf.end());
    coords.insert(coords.end(), a.scalar_part().begin(), a.scalar_part().end());
    coords.insert(coords.end(), b.scalar_part().begin(), b.scalar_part().end());
    return HilbertPoint(make_layout(std::move(grids), la.scalar_dim() + lb.scalar_dim()), std::move(coords));
}

Sample::Sample(std::vector<HilbertPoint> elements) : elements_(std::move(elements)) {
    for (std::size_t i = 1; i < elements_.size(); ++i) {
        if (!elements_[i].layout().conformable(elements_[0].layout()))
            throw ConformabilityError("sample element " + std::to_string(i) + " is not conformable with element 0");
    }
}

const Layout& Sample::layout() const { return *layout_ptr(); }

const LayoutPtr& Sample::layout_ptr() const {
    if (elements_.empty()) throw DomainError("empty sample has no layout");
    return elements_.front().layout_ptr();
}

std::vector<double> Sample::coordinate_matrix() const {
    if (elements_.empty()) return {};
    const std::size_t d = layout().dim();
    std::vector<double> m(elements_.size() * d);
    for (std::size_t i = 0; i < elements_.size(); ++i)
        std::copy(elements_[i].coords().begin(), elements_[i].coords().end(), m.begin() + i * d);
    return m;
}

Sample center(const Sample& sample) {
    if (sample.empty()) throw DomainError("cannot center an empty sample");
    if (sample.centered()) return sample;
    const std::size_t n = sample.size();
    const std::size_t d = sample.layout().dim();
    std::vector<double> mean(d, 0.0);
    for (const auto& x : sample.elements_) {
        const auto c = x.coords();
        for (std::size_t k = 0; k < d; ++k) mean[k] += c[k];
    }
    for (double& v : mean) v /= static_cast<double>(n);

    Sample out = sample;
    for (auto& x : out.elements_) {
        auto c = x.coords();
        for (std::size_t k = 0; k < d; ++k) c[k] -= mean[k];
    }
    out.mean_ = HilbertPoint(sample.layout_ptr(), std::move(mean));
    return out;
}

Sample direct_sum(const Sample& a, const Sample& b) {
    if (a.size() != b.size())
        throw DomainError("direct sum of samples with " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()) + " elements");
    std::vector<HilbertPoint> out;
    out.reserve(a.size());
    LayoutPtr shared;
    for (std::size_t i = 0; i < a.size(); ++i) {
        HilbertPoint p = direct_sum(a[i], b[i]);
        if (!shared) shared = p.layout_ptr();
        out.emplace_back(shared, std::vector<double>(p.coords().begin(), p.coords().end()));
    }
    return Sample(std::move(out));
}

}  // namespace flm
