#include "flm/simgen.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "flm/bessel.hpp"
#include "flm/error.hpp"
#include "flm/kernels.hpp"

namespace flm::sim {

namespace {

constexpr std::array<std::string_view, 3> kFamilyNames{"scalar_on_function", "function_on_function",
                                                       "function_on_vector"};
constexpr std::array<std::string_view, 4> kVariantNames{"sparsest", "sparse", "dense", "densest"};
constexpr std::array<std::string_view, 2> kNoiseNames{"scalar_laplace", "functional_laplace"};

template <class E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == name) return static_cast<E>(i);
    return std::nullopt;
}

template <std::size_t N>
std::string join(const std::array<std::string_view, N>& names) {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

// sum_{j<=K} phi_j(u) / (j+2)^1.2
double decaying_fourier_sum(double u, std::size_t k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += fourier_basis(j, u) / std::pow(j + 2.0, 1.2);
    return acc;
}

// sum_{j<=K} c (j+2)^-1 phi_j(t)
double harmonic_fourier_sum(double t, std::size_t k, double c) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += c / (j + 2.0) * fourier_basis(j, t);
    return acc;
}

double sof_weight(Variant v, double t, std::size_t k_trunc) {
    switch (v) {
        case Variant::sparsest: return 1.0;
        case Variant::sparse: return harmonic_fourier_sum(t, 3, 11.0 / 4.0);
        case Variant::dense: return harmonic_fourier_sum(t, k_trunc, 12.0 / 4.0);
        case Variant::densest: return 6.0 / 4.0 * t * t * std::exp(t);
    }
    return 0.0;
}

double rank_one_profile(Variant v, double u, std::size_t k_trunc) {
    switch (v) {
        case Variant::sparse: return decaying_fourier_sum(u, 3);
        case Variant::dense: return decaying_fourier_sum(u, k_trunc);
        default: return 0.0;
    }
}

// Function-on-function g(s,t) for s on the predictor grid, t on the response grid.
double fof_kernel(Variant v, double s, double t, double hs, double ht) {
    switch (v) {
        case Variant::sparsest: return 5.0 / 7.0;
        case Variant::sparse: return 10.0 / 4.0 * hs * ht;
        case Variant::dense: return 9.0 / 4.0 * hs * ht;
        case Variant::densest: {
            const double st = s * t;
            return 10.0 / 4.0 * st * st * std::sqrt(std::exp(0.5 * (s + t)));
        }
    }
    return 0.0;
}

double fov_kernel(Variant v, double u, double t, double hu, double ht) {
    switch (v) {
        case Variant::sparsest: return 11.0 / 10.0;
        case Variant::sparse: return 11.0 / 4.0 * hu * ht;
        case Variant::dense: return 6.0 / 4.0 * hu * ht;
        case Variant::densest:
            return 11.0 / 4.0 * u * u * std::sqrt(std::exp(u / 4.0)) * t * t * std::sqrt(std::exp(t / 4.0));
    }
    return 0.0;
}

RowMatrix symmetric_root(const Eigen::MatrixXd& m, double tol, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError(std::string(what) + ": eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -tol * std::max(top, 1.0))
        throw NumericalError(std::string(what) + " is indefinite beyond tolerance (min eigenvalue " +
                             std::to_string(ev.minCoeff()) + ")");
    const Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

}  // namespace

std::string_view to_string(Family f) noexcept { return kFamilyNames[static_cast<std::size_t>(f)]; }
std::string_view to_string(Variant v) noexcept { return kVariantNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(NoiseKind k) noexcept { return kNoiseNames[static_cast<std::size_t>(k)]; }
std::optional<Family> parse_family(std::string_view name) noexcept { return lookup<Family>(kFamilyNames, name); }
std::optional<Variant> parse_variant(std::string_view name) noexcept { return lookup<Variant>(kVariantNames, name); }
std::optional<NoiseKind> parse_noise_kind(std::string_view name) noexcept {
    return lookup<NoiseKind>(kNoiseNames, name);
}
std::string family_names() { return join(kFamilyNames); }
std::string variant_names() { return join(kVariantNames); }

void MaternSpec::validate() const {
    if (!(nu > 0.0) || !(rho > 0.0) || !(sigma > 0.0) || !std::isfinite(nu) || !std::isfinite(rho) ||
        !std::isfinite(sigma))
        throw DomainError("Matern parameters nu, rho, sigma must be positive and finite");
}

void SlopeSpec::validate() const {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("signal strength r must be >= 0, got " + std::to_string(r));
    if (k_trunc < 1) throw DomainError("k_trunc must be >= 1");
    if (q < 1) throw DomainError("q must be >= 1");
}

void NoiseSpec::validate() const {
    if (k_terms < 1) throw DomainError("noise k_terms must be >= 1");
    if (!(decay > 1.0)) throw DomainError("noise decay must be > 1, got " + std::to_string(decay));
}

NoiseSpec default_noise(Family family) {
    NoiseSpec n;
    n.kind = family == Family::scalar_on_function ? NoiseKind::scalar_laplace : NoiseKind::functional_laplace;
    return n;
}

double matern_cov(double s, double t, const MaternSpec& spec) {
    const double var = spec.sigma * spec.sigma;
    const double d = std::abs(s - t);
    if (d == 0.0) return var;
    const double a = std::sqrt(2.0 * spec.nu) * d / spec.rho;
    if (spec.nu == 0.5) return var * std::exp(-a);
    return var * std::pow(2.0, 1.0 - spec.nu) / std::tgamma(spec.nu) * std::pow(a, spec.nu) * bessel_k(spec.nu, a);
}

GaussianProcessSampler::GaussianProcessSampler(GridPtr grid, const MaternSpec& spec) : grid_(std::move(grid)) {
    spec.validate();
    if (!grid_) throw DomainError("null grid");
    layout_ = make_layout({grid_}, 0);
    const auto pts = grid_->points();
    const std::size_t m = pts.size();
    Eigen::MatrixXd cov(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) cov(i, j) = cov(j, i) = matern_cov(pts[i], pts[j], spec);
    factor_ = symmetric_root(cov, 1e-8, "Matern covariance matrix");
}

Sample GaussianProcessSampler::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw DomainError("sample_gp needs n >= 1");
    const std::size_t m = grid_->size();
    const auto& kt = kernels::active();
    std::vector<HilbertPoint> out;
    out.reserve(n);
    std::vector<double> z(m);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream st(rng::derive(seed, {i}));
        st.fill_normal(z);
        std::vector<double> path(m);
        kt.gemv(factor_.data(), m, m, z.data(), path.data());
        out.emplace_back(layout_, std::move(path));
    }
    return Sample(std::move(out));
}

Sample sample_gp(const GridPtr& grid, const MaternSpec& spec, std::size_t n, std::uint64_t seed) {
    return GaussianProcessSampler(grid, spec).sample(n, seed);
}

double fourier_basis(std::size_t j, double t) {
    if (j < 1) throw DomainError("Fourier index starts at 1");
    if (j == 1) return 1.0;
    const double freq = 2.0 * std::numbers::pi * static_cast<double>(j / 2) * t;
    return std::numbers::sqrt2 * (j % 2 == 0 ? std::cos(freq) : std::sin(freq));
}

std::vector<double> sample_laplace(double scale, std::size_t n, std::uint64_t seed) {
    if (!(scale > 0.0)) throw DomainError("Laplace scale must be positive");
    rng::Stream st(rng::derive(seed, {rng::tag::dataset}));
    std::vector<double> out(n);
    for (double& v : out) v = rng::laplace_quantile(st.uniform(), scale);
    return out;
}

KarhunenLoeveSampler::KarhunenLoeveSampler(GridPtr grid, std::vector<double> eigenvalues, ScoreLaw law)
    : grid_(std::move(grid)), eigenvalues_(std::move(eigenvalues)), law_(law) {
    if (!grid_) throw DomainError("null grid");
    if (eigenvalues_.empty()) throw DomainError("Karhunen-Loeve expansion needs at least one eigenvalue");
    for (double l : eigenvalues_)
        if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("eigenvalues must be finite and >= 0");
    layout_ = make_layout({grid_}, 0);
    const auto pts = grid_->points();
    const std::size_t m = pts.size();
    const std::size_t k = eigenvalues_.size();
    scaled_basis_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) scaled_basis_(i, j) = std::sqrt(eigenvalues_[j]) * fourier_basis(j + 1, pts[i]);
}

HilbertPoint KarhunenLoeveSampler::draw(rng::Stream& stream) const {
    const std::size_t k = eigenvalues_.size();
    std::vector<double> xi(k);
    if (law_ == ScoreLaw::gaussian) {
        stream.fill_normal(xi);
    } else {
        for (double& v : xi) v = rng::laplace_quantile(stream.uniform(), std::numbers::sqrt2 / 2.0);
    }
    std::vector<double> path(grid_->size());
    kernels::active().gemv(scaled_basis_.data(), grid_->size(), k, xi.data(), path.data());
    return HilbertPoint(layout_, std::move(path));
}

Sample KarhunenLoeveSampler::sample(std::size_t n, std::uint64_t seed) const {
    std::vector<HilbertPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream st(rng::derive(seed, {i}));
        out.push_back(draw(st));
    }
    return Sample(std::move(out));
}

EigenSystem KarhunenLoeveSampler::eigensystem() const {
    EigenSystem es;
    es.eigenvalues = eigenvalues_;
    const auto pts = grid_->points();
    for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
        std::vector<double> v(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) v[i] = fourier_basis(j + 1, pts[i]);
        es.eigenelements.emplace_back(layout_, std::move(v));
    }
    return es;
}

SlopeOperator::SlopeOperator(const SlopeSpec& spec, GridPtr x_grid, GridPtr y_grid) : spec_(spec) {
    spec_.validate();
    const bool functional_x = spec_.family != Family::function_on_vector;
    const bool functional_y = spec_.family != Family::scalar_on_function;
    if (functional_x && !x_grid) throw DomainError("slope needs a predictor grid");
    if (functional_y && !y_grid) throw DomainError("slope needs a response grid");
    x_layout_ = functional_x ? make_layout({x_grid}, 0) : make_layout({}, spec_.q);
    y_layout_ = functional_y ? make_layout({y_grid}, 0) : make_layout({}, 1);

    const std::size_t dx = x_layout_->dim();
    const std::size_t dy = y_layout_->dim();
    kernel_.resize(static_cast<Eigen::Index>(dy), static_cast<Eigen::Index>(dx));
    const Variant v = spec_.variant;
    const std::size_t k = spec_.k_trunc;

    switch (spec_.family) {
        case Family::scalar_on_function: {
            const auto s = x_grid->points();
            const auto w = x_grid->weights();
            for (std::size_t i = 0; i < dx; ++i) kernel_(0, i) = w[i] * sof_weight(v, s[i], k);
            break;
        }
        case Family::function_on_function: {
            const auto s = x_grid->points();
            const auto w = x_grid->weights();
            const auto t = y_grid->points();
            std::vector<double> hs(dx), ht(dy);
            for (std::size_t i = 0; i < dx; ++i) hs[i] = rank_one_profile(v, s[i], k);
            for (std::size_t i = 0; i < dy; ++i) ht[i] = rank_one_profile(v, t[i], k);
            for (std::size_t a = 0; a < dy; ++a)
                for (std::size_t i = 0; i < dx; ++i) kernel_(a, i) = w[i] * fof_kernel(v, s[i], t[a], hs[i], ht[a]);
            break;
        }
        case Family::function_on_vector: {
            const auto t = y_grid->points();
            const std::size_t q = spec_.q;
            std::vector<double> u(q), hu(q), ht(dy);
            for (std::size_t j = 0; j < q; ++j) {
                // Component j sits at (j-1)/(q-1) on [0, 1]; a single component sits at 0.
                u[j] = q == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(q - 1);
                hu[j] = rank_one_profile(v, u[j], k);
            }
            for (std::size_t a = 0; a < dy; ++a) ht[a] = rank_one_profile(v, t[a], k);
            for (std::size_t a = 0; a < dy; ++a)
                for (std::size_t j = 0; j < q; ++j) kernel_(a, j) = fov_kernel(v, u[j], t[a], hu[j], ht[a]);
            break;
        }
    }
}

HilbertPoint SlopeOperator::apply(const HilbertPoint& x, double r) const {
    if (!x.layout().conformable(*x_layout_))
        throw DomainError(std::string("predictor does not match the ") + std::string(to_string(spec_.family)) +
                          " slope (expected " +
                          (spec_.family == Family::function_on_vector ? "a length-" + std::to_string(spec_.q) + " vector"
                                                                      : std::string("a function on the slope grid")) +
                          ")");
    const std::size_t dy = y_layout_->dim();
    std::vector<double> out(dy);
    kernels::active().gemv(kernel_.data(), dy, x_layout_->dim(), x.coords().data(), out.data());
    for (double& v : out) v *= r;
    return HilbertPoint(y_layout_, std::move(out));
}

GridPtr default_grid() {
    static const GridPtr grid = make_grid(Grid::uniform(0.0, 1.0, 101));
    return grid;
}

HilbertPoint apply_slope(const SlopeSpec& spec, const HilbertPoint& x) {
    GridPtr xg;
    GridPtr yg;
    if (spec.family != Family::function_on_vector) {
        if (x.layout().functional_count() != 1 || x.layout().scalar_dim() != 0)
            throw DomainError(std::string(to_string(spec.family)) + " slope needs a single functional predictor");
        xg = x.layout().grid_ptr(0);
    }
    if (spec.family == Family::function_on_function) yg = xg;
    if (spec.family == Family::function_on_vector) yg = default_grid();
    return SlopeOperator(spec, xg, yg).apply(x);
}

namespace {

GridPtr design_grid(const DatasetSpec& d) {
    if (d.grid_points < 2) throw DomainError("grid needs at least 2 points");
    if (d.grid_points == 101) return default_grid();
    return make_grid(Grid::uniform(0.0, 1.0, d.grid_points));
}

NoiseSpec checked_noise(const DatasetSpec& d) {
    d.slope.validate();
    d.matern.validate();
    const NoiseSpec n = d.noise.value_or(default_noise(d.slope.family));
    n.validate();
    const bool scalar_y = d.slope.family == Family::scalar_on_function;
    if (scalar_y != (n.kind == NoiseKind::scalar_laplace))
        throw DomainError(std::string("noise kind ") + std::string(to_string(n.kind)) + " does not fit a " +
                          std::string(to_string(d.slope.family)) + " design");
    return n;
}

}  // namespace

DatasetGenerator::DatasetGenerator(const DatasetSpec& design)
    : design_(design),
      noise_(checked_noise(design)),
      grid_(design_grid(design)),
      slope_(design.slope, grid_, grid_) {
    const Family f = design_.slope.family;
    if (f != Family::function_on_vector) gp_.emplace(grid_, design_.matern);
    if (noise_.kind == NoiseKind::functional_laplace) {
        std::vector<double> lambda(noise_.k_terms);
        for (std::size_t j = 0; j < lambda.size(); ++j) lambda[j] = std::pow(j + 1.0, -noise_.decay);
        functional_noise_.emplace(grid_, std::move(lambda), ScoreLaw::laplace);
    } else {
        scalar_response_layout_ = make_layout({}, 1);
    }
    if (f == Family::function_on_vector) {
        const auto q = static_cast<Eigen::Index>(design_.slope.q);
        Eigen::MatrixXd g(q, q);
        rng::Stream st(rng::derive(design_.design_seed, {rng::tag::design}));
        for (Eigen::Index j = 0; j < q; ++j)
            for (Eigen::Index i = 0; i < q; ++i) g(i, j) = st.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        mixing_ = qr.householderQ() * Eigen::MatrixXd::Identity(q, q);
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < q; ++j)
            if (r(j, j) < 0.0) mixing_.col(j) *= -1.0;
        Eigen::VectorXd root(q);
        for (Eigen::Index j = 0; j < q; ++j) root(j) = std::pow(j + 1.0, -0.75);  // sqrt(j^-1.5)
        sigma_root_ = mixing_ * root.asDiagonal() * mixing_.transpose();
        vector_layout_ = make_layout({}, design_.slope.q);
    }
}

Sample DatasetGenerator::predictors(std::size_t n, std::uint64_t seed) const {
    if (gp_) return gp_->sample(n, seed);
    const std::size_t q = design_.slope.q;
    std::vector<HilbertPoint> out;
    out.reserve(n);
    std::vector<double> l(q);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream st(rng::derive(seed, {i}));
        for (double& v : l) v = rng::laplace_quantile(st.uniform(), std::numbers::sqrt2 / 2.0);
        std::vector<double> x(q);
        kernels::active().gemv(sigma_root_.data(), q, q, l.data(), x.data());
        out.emplace_back(vector_layout_, std::move(x));
    }
    return Sample(std::move(out));
}

HilbertPoint DatasetGenerator::noise(rng::Stream& stream) const {
    if (functional_noise_) return functional_noise_->draw(stream);
    return HilbertPoint(scalar_response_layout_, {rng::laplace_quantile(stream.uniform(), std::numbers::sqrt2 / 2.0)});
}

Dataset DatasetGenerator::generate(double r, std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw DomainError("dataset size must be >= 1");
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("signal strength r must be >= 0");
    Sample x = predictors(n, rng::derive(seed, {rng::tag::dataset, 0}));
    const std::uint64_t noise_key = rng::derive(seed, {rng::tag::dataset, 1});
    std::vector<HilbertPoint> ys;
    ys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream st(rng::derive(noise_key, {i}));
        HilbertPoint y = noise(st);
        y += slope_.apply(x[i], r);
        for (double& v : y.coords()) v += 1.0;
        ys.push_back(std::move(y));
    }
    return Dataset{std::move(x), Sample(std::move(ys))};
}

Dataset generate_dataset(const DatasetSpec& spec) { return DatasetGenerator(spec).generate(); }

}  // namespace flm::sim
