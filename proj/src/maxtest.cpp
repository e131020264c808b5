#include "flm/maxtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bootstrap_engine.hpp"
#include "flm/error.hpp"
#include "flm/rng.hpp"
#include "flm/tauselect.hpp"

namespace flm {

namespace {

constexpr double kDegenerateRatio = 1e-12;
constexpr double kPsdTolerance = 1e-10;

}  // namespace

CrossScoreMatrix cross_scores(const RowMatrix& xscores, const RowMatrix& yscores) {
    if (xscores.rows() != yscores.rows())
        throw DomainError("cross scores need matching n: " + std::to_string(xscores.rows()) + " vs " +
                          std::to_string(yscores.rows()));
    CrossScoreMatrix cs;
    cs.p1 = static_cast<std::size_t>(xscores.cols());
    cs.p2 = static_cast<std::size_t>(yscores.cols());
    const Eigen::Index n = xscores.rows();
    const Eigen::Index p2 = yscores.cols();
    cs.v.resize(n, xscores.cols() * p2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j1 = 0; j1 < xscores.cols(); ++j1)
            for (Eigen::Index j2 = 0; j2 < p2; ++j2) cs.v(i, j1 * p2 + j2) = xscores(i, j1) * yscores(i, j2);
    return cs;
}

Eigen::MatrixXd Summary::covariance() const { return factor * factor.transpose(); }

std::vector<std::size_t> Summary::retained() const {
    std::vector<std::size_t> out;
    if (sd.size() == 0) return out;
    const double cutoff = kDegenerateRatio * sd.maxCoeff();
    for (Eigen::Index j = 0; j < sd.size(); ++j)
        if (sd(j) > cutoff) out.push_back(static_cast<std::size_t>(j));
    return out;
}

Summary Summary::from_moments(Eigen::VectorXd mean, const Eigen::MatrixXd& cov, std::size_t n) {
    const Eigen::Index p = mean.size();
    if (cov.rows() != p || cov.cols() != p) throw DomainError("covariance shape does not match the mean");
    if (p > 0 && (cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
        throw NumericalError("covariance matrix is not symmetric");
    Summary s;
    s.n = n;
    s.mean = std::move(mean);
    s.sd = cov.diagonal().cwiseMax(0.0).cwiseSqrt();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cov_solver(cov, Eigen::EigenvaluesOnly);
    const double top = cov_solver.eigenvalues().maxCoeff();
    if (cov_solver.eigenvalues().minCoeff() < -kPsdTolerance * std::max(top, 0.0))
        throw NumericalError("covariance matrix is not positive semi-definite");

    Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(p, p);
    const double cutoff = p > 0 ? kDegenerateRatio * s.sd.maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        if (!(s.sd(i) > cutoff)) continue;
        for (Eigen::Index j = 0; j < p; ++j)
            if (s.sd(j) > cutoff) corr(i, j) = cov(i, j) / (s.sd(i) * s.sd(j));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
    if (solver.info() != Eigen::Success) throw NumericalError("correlation eigendecomposition failed");
    const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd& q = solver.eigenvectors();
    const Eigen::MatrixXd sym_root = q * root.asDiagonal() * q.transpose();
    s.factor = s.sd.asDiagonal() * sym_root;
    return s;
}

Summary summarize(const CrossScoreMatrix& cs) {
    const Eigen::Index n = cs.v.rows();
    const Eigen::Index p = cs.v.cols();
    if (n < 2) throw DomainError("summary needs n >= 2, got " + std::to_string(n));
    Summary s;
    s.n = static_cast<std::size_t>(n);
    s.mean = Eigen::VectorXd::Zero(p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) s.mean(j) += cs.v(i, j);
    s.mean /= static_cast<double>(n);

    const double inv_root_n = 1.0 / std::sqrt(static_cast<double>(n));
    s.factor.resize(p, n);
    s.sd = Eigen::VectorXd::Zero(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double ss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double c = cs.v(i, j) - s.mean(j);
            ss += c * c;
            s.factor(j, i) = c * inv_root_n;
        }
        s.sd(j) = std::sqrt(ss / static_cast<double>(n));
    }
    return s;
}

namespace detail {

CompactSummary compact(const Summary& summary) {
    CompactSummary c;
    c.index = summary.retained();
    if (c.index.empty()) throw DegenerateDataError("every cross-score coordinate has zero variance");
    const auto k = summary.factor.cols();
    c.factor.resize(static_cast<Eigen::Index>(c.index.size()), k);
    const double root_n = std::sqrt(static_cast<double>(summary.n));
    for (std::size_t r = 0; r < c.index.size(); ++r) {
        const auto j = static_cast<Eigen::Index>(c.index[r]);
        c.factor.row(static_cast<Eigen::Index>(r)) = summary.factor.row(j);
        c.sd.push_back(summary.sd(j));
        c.scaled_mean.push_back(root_n * summary.mean(j));
    }
    return c;
}

std::vector<double> scales_for(const CompactSummary& c, double tau) {
    std::vector<double> out(c.sd.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::pow(c.sd[j], tau);
    return out;
}

}  // namespace detail

MaxMin max_min_statistics(const Summary& summary, double tau) {
    const auto c = detail::compact(summary);
    const auto scale = detail::scales_for(c, tau);
    const auto e = kernels::active().scaled_extrema(c.scaled_mean.data(), nullptr, scale.data(), scale.size());
    return {e.max, e.min};
}

double empirical_quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw DomainError("quantile of an empty set");
    const double b = static_cast<double>(values.size());
    // The small offset keeps exact products such as 0.975 * 200000 from
    // rounding up to the next order statistic.
    auto k = static_cast<std::size_t>(std::ceil(prob * b - 1e-7));
    k = std::clamp<std::size_t>(k, 1, values.size());
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
    return values[k - 1];
}

BootstrapQuantiles bootstrap_quantiles(const Summary& summary, double tau, std::size_t b, double significance,
                                       std::uint64_t seed, unsigned workers) {
    if (!(significance > 0.0 && significance < 1.0))
        throw DomainError("significance must lie in (0, 1), got " + std::to_string(significance));
    if (b < 100) throw DomainError("bootstrap needs b >= 100, got " + std::to_string(b));
    const auto c = detail::compact(summary);
    const auto scale = detail::scales_for(c, tau);

    BootstrapQuantiles q;
    q.b = b;
    q.significance = significance;
    q.m_samples.resize(b);
    q.l_samples.resize(b);
    const auto& kt = kernels::active();
    detail::for_each_draw(c, b, rng::derive(seed, {rng::tag::bootstrap}), workers,
                          [&](std::size_t r, const double* s) {
                              const auto e = kt.scaled_extrema(s, nullptr, scale.data(), scale.size());
                              q.m_samples[r] = e.max;
                              q.l_samples[r] = e.min;
                          });
    q.q_m = empirical_quantile(q.m_samples, 1.0 - significance / 2.0);
    q.q_l = empirical_quantile(q.l_samples, significance / 2.0);
    return q;
}

Decision decide(double t_u, double t_l, const BootstrapQuantiles& quantiles) {
    Decision d;
    d.reject = (t_u > quantiles.q_m) || (t_l < quantiles.q_l);
    const auto upper = std::count_if(quantiles.m_samples.begin(), quantiles.m_samples.end(),
                                     [&](double m) { return m >= t_u; });
    const auto lower = std::count_if(quantiles.l_samples.begin(), quantiles.l_samples.end(),
                                     [&](double l) { return l <= t_l; });
    const double denom = static_cast<double>(quantiles.m_samples.size()) + 1.0;
    const double tail = std::min((1.0 + static_cast<double>(upper)) / denom, (1.0 + static_cast<double>(lower)) / denom);
    d.p_value = std::min(1.0, 2.0 * tail);
    return d;
}

Eigen::MatrixX2d simultaneous_intervals(const Summary& summary, double tau, const BootstrapQuantiles& quantiles) {
    const Eigen::Index p = summary.mean.size();
    Eigen::MatrixX2d sci(p, 2);
    const double inv_root_n = 1.0 / std::sqrt(static_cast<double>(summary.n));
    std::vector<bool> keep(static_cast<std::size_t>(p), false);
    for (const std::size_t j : summary.retained()) keep[j] = true;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double m = summary.mean(j);
        if (!keep[static_cast<std::size_t>(j)]) {
            sci(j, 0) = sci(j, 1) = m;
            continue;
        }
        const double half = inv_root_n * std::pow(summary.sd(j), tau);
        sci(j, 0) = m - half * quantiles.q_m;
        sci(j, 1) = m - half * quantiles.q_l;
    }
    return sci;
}

namespace {

// Lexicographic order on the raw coordinates of (x_i, y_i).
std::vector<std::size_t> canonical_order(const Sample& x, const Sample& y) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key_less = [&](std::size_t a, std::size_t b) {
        const auto xa = x[a].coords(), xb = x[b].coords();
        if (!std::ranges::equal(xa, xb)) return std::ranges::lexicographical_compare(xa, xb);
        return std::ranges::lexicographical_compare(y[a].coords(), y[b].coords());
    };
    std::stable_sort(order.begin(), order.end(), key_less);
    return order;
}

Sample reorder(const Sample& s, const std::vector<std::size_t>& order) {
    std::vector<HilbertPoint> out;
    out.reserve(order.size());
    for (const std::size_t i : order) out.push_back(s[i]);
    return Sample(std::move(out));
}

std::size_t default_count(const Layout& layout, std::size_t n) {
    return layout.infinite_dimensional() ? n : layout.scalar_dim();
}

std::size_t fixed_capacity(const Layout& layout) {
    std::size_t cap = layout.scalar_dim();
    for (std::size_t k = 0; k < layout.functional_count(); ++k) cap += fourier_capacity(layout.grid(k).size());
    return cap;
}

EigenSystem choose_basis(const Sample& centered, const std::optional<std::size_t>& requested,
                         const std::optional<EigenSystem>& supplied, BasisChoice choice, unsigned workers) {
    const std::size_t n = centered.size();
    if (supplied) {
        if (supplied->empty()) throw DomainError("supplied basis is empty");
        if (!centered.layout().conformable(supplied->eigenelements.front().layout()))
            throw ConformabilityError("supplied basis is not conformable with the sample");
        EigenSystem b = *supplied;
        if (requested && *requested < b.count()) {
            b.eigenelements.erase(b.eigenelements.begin() + static_cast<std::ptrdiff_t>(*requested),
                                  b.eigenelements.end());
            if (b.eigenvalues.size() > *requested) b.eigenvalues.resize(*requested);
        }
        return b;
    }
    const std::size_t want = requested.value_or(default_count(centered.layout(), n));
    if (want == 0) throw DomainError("number of components must be >= 1");
    if (choice == BasisChoice::empirical) return empirical_eigensystem(centered, want, workers);
    return fixed_basis(centered.layout_ptr(), std::min(want, fixed_capacity(centered.layout())));
}

}  // namespace

TestResult run_test(const Sample& x, const Sample& y, const TestConfig& config) {
    if (x.size() != y.size())
        throw DomainError("x has " + std::to_string(x.size()) + " observations but y has " +
                          std::to_string(y.size()));
    if (x.size() < 3) throw DomainError("the test needs n >= 3, got " + std::to_string(x.size()));
    if (!(config.significance > 0.0 && config.significance < 1.0))
        throw DomainError("significance must lie in (0, 1)");
    config.tau.validate();

    const auto order = canonical_order(x, y);
    const Sample xc = center(reorder(x, order));
    const Sample yc = center(reorder(y, order));

    const EigenSystem xb = choose_basis(xc, config.p1, config.x_basis, config.basis, config.workers);
    const EigenSystem yb = choose_basis(yc, config.p2, config.y_basis, config.basis, config.workers);
    if (xb.empty() || yb.empty()) throw DegenerateDataError("a sample has zero variance; no components available");

    const CrossScoreMatrix cs = cross_scores(project_scores(xc, xb), project_scores(yc, yb));
    const Summary summary = summarize(cs);

    TestResult res;
    res.p1 = cs.p1;
    res.p2 = cs.p2;
    res.seed = config.seed;
    res.significance = config.significance;
    res.tau = select_tau(summary, config.tau, config.significance, config.seed, config.workers);

    const MaxMin stats = max_min_statistics(summary, res.tau);
    res.t_u = stats.t_u;
    res.t_l = stats.t_l;
    res.quantiles = bootstrap_quantiles(summary, res.tau, config.b, config.significance, config.seed, config.workers);
    const Decision d = decide(res.t_u, res.t_l, res.quantiles);
    res.reject = d.reject;
    res.p_value = d.p_value;
    res.sci = simultaneous_intervals(summary, res.tau, res.quantiles);
    return res;
}

}  // namespace flm
