#include "flm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "flm/activity.hpp"
#include "flm/error.hpp"
#include "flm/harness.hpp"
#include "flm/io.hpp"
#include "flm/maxtest.hpp"
#include "flm/parallel.hpp"
#include "text_util.hpp"

namespace flm::cli {

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageFailure = 2;

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto field : detail::split(text)) {
        const auto v = detail::parse_double(field);
        if (!v) throw ValidationError(flag + ": not a number '" + std::string(detail::trim(field)) + "'");
        out.push_back(*v);
    }
    return out;
}

struct TauFlags {
    std::optional<double> fixed;
    std::optional<std::string> grid;
    std::optional<std::size_t> inner_b;

    void add(CLI::App& app) {
        auto* f = app.add_option("--tau", fixed, "Fixed standardization exponent in [0, 1)");
        auto* g = app.add_option("--tau-grid", grid, "Comma-separated candidate exponents for data-driven selection");
        f->excludes(g);
        app.add_option("--inner-b", inner_b, "Bootstrap draws per stage of tau selection");
    }
    bool given() const { return fixed || grid || inner_b; }
    TauPolicy policy(TauPolicy base) const {
        if (fixed) return TauPolicy::fixed(*fixed);
        if (grid) base = TauPolicy::over_grid(parse_list(*grid, "--tau-grid"), base.inner_b);
        if (inner_b) {
            base.mode = TauPolicy::Mode::grid;
            base.inner_b = *inner_b;
        }
        return base;
    }
};

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("--alpha must lie in (0, 1), got " + detail::format_double(alpha));
}

BasisChoice parse_basis(const std::string& s) {
    if (s == "empirical") return BasisChoice::empirical;
    if (s == "fourier") return BasisChoice::fourier;
    throw ValidationError("--basis must be empirical or fourier, got '" + s + "'");
}

// ---------------------------------------------------------------------------

struct TestCommand {
    std::optional<std::string> x, x_scalars, y, y_scalars, output;
    std::optional<std::size_t> p1, p2;
    TauFlags tau;
    std::size_t b = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::string basis = "empirical";
    unsigned workers = default_workers();

    void add(CLI::App& app) {
        app.add_option("--x", x, "Predictor sample (functional CSV or JSON)");
        app.add_option("--x-scalars", x_scalars, "Scalar predictors CSV (one row per observation)");
        app.add_option("--y", y, "Response sample (functional CSV or JSON)");
        app.add_option("--y-scalars", y_scalars, "Scalar responses CSV (one row per observation)");
        app.add_option("--p1", p1, "Number of predictor components");
        app.add_option("--p2", p2, "Number of response components");
        tau.add(app);
        app.add_option("--b", b, "Bootstrap draws")->capture_default_str();
        app.add_option("--alpha", alpha, "Significance level")->capture_default_str();
        app.add_option("--seed", seed, "Random seed")->capture_default_str();
        app.add_option("--basis", basis, "empirical or fourier")->capture_default_str();
        app.add_option("--workers", workers, "Worker threads")->capture_default_str();
        app.add_option("--output", output, "Write the JSON result here instead of stdout");
    }

    int run(std::ostream& out) const {
        check_alpha(alpha);
        if (!x && !x_scalars) throw ValidationError("test needs --x and/or --x-scalars");
        if (!y && !y_scalars) throw ValidationError("test needs --y and/or --y-scalars");
        auto path = [](const std::optional<std::string>& s) {
            return s ? std::optional<std::filesystem::path>(*s) : std::nullopt;
        };
        const Sample xs = io::read_sample(path(x), path(x_scalars));
        const Sample ys = io::read_sample(path(y), path(y_scalars));
        if (xs.size() != ys.size())
            throw ValidationError("X has " + std::to_string(xs.size()) + " observations but Y has " +
                                  std::to_string(ys.size()));
        TestConfig cfg;
        cfg.p1 = p1;
        cfg.p2 = p2;
        cfg.tau = tau.policy(TauPolicy{});
        cfg.b = b;
        cfg.significance = alpha;
        cfg.seed = seed;
        cfg.basis = parse_basis(basis);
        cfg.workers = std::max(1u, workers);
        const auto json = io::test_result_json(run_test(xs, ys, cfg));
        if (output) {
            auto f = detail::open_for_writing(*output);
            f << json;
        } else {
            out << json;
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------

struct SimulateCommand {
    std::optional<std::string> config, output, export_prefix;
    std::optional<std::string> family, variant, r_grid, basis;
    std::optional<std::size_t> n, replications, b, q, p1, p2;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    TauFlags tau;
    unsigned workers = default_workers();
    bool timing = false;

    void add(CLI::App& app) {
        app.add_option("--config", config, "JSON study configuration");
        app.add_option("--family", family, "scalar_on_function, function_on_function or function_on_vector");
        app.add_option("--variant", variant, "sparsest, sparse, dense or densest");
        app.add_option("--n", n, "Sample size");
        app.add_option("--r-grid", r_grid, "Comma-separated signal strengths");
        app.add_option("--replications", replications, "Replications per signal strength");
        app.add_option("--b", b, "Bootstrap draws per test");
        app.add_option("--alpha", alpha, "Significance level");
        app.add_option("--seed", seed, "Master seed");
        app.add_option("--q", q, "Predictor dimension (function_on_vector)");
        app.add_option("--p1", p1, "Number of predictor components");
        app.add_option("--p2", p2, "Number of response components");
        app.add_option("--basis", basis, "empirical or fourier");
        tau.add(app);
        app.add_option("--workers", workers, "Worker threads")->capture_default_str();
        app.add_option("--output", output, "Results CSV path (stdout when absent)");
        app.add_flag("--timing", timing, "Record wall time per row");
        app.add_option("--export-dataset", export_prefix,
                       "Write PREFIX_x.csv / PREFIX_y.csv for the first replicate at the first r and exit");
    }

    harness::StudyConfig study() const {
        harness::StudyConfig c = config ? harness::read_study_config(*config) : harness::StudyConfig{};
        std::vector<std::string> errors;
        if (family) {
            if (auto f = sim::parse_family(*family)) c.family = *f;
            else errors.push_back("unknown family '" + *family + "' (valid: " + sim::family_names() + ")");
        }
        if (variant) {
            if (auto v = sim::parse_variant(*variant)) c.variant = *v;
            else errors.push_back("unknown variant '" + *variant + "' (valid: " + sim::variant_names() + ")");
        }
        if (!errors.empty()) {
            std::string msg = "invalid flags:";
            for (const auto& e : errors) msg += "\n  - " + e;
            throw ValidationError(msg);
        }
        if (n) c.n = *n;
        if (r_grid) c.r_grid = parse_list(*r_grid, "--r-grid");
        if (replications) c.replications = *replications;
        if (b) c.bootstrap = *b;
        if (alpha) {
            check_alpha(*alpha);
            c.significance = *alpha;
        }
        if (seed) c.seed = *seed;
        if (q) c.q = *q;
        if (p1) c.p1 = *p1;
        if (p2) c.p2 = *p2;
        if (basis) c.basis = parse_basis(*basis);
        if (tau.given()) c.tau = tau.policy(c.tau);
        c.validate();
        return c;
    }

    int run(std::ostream& out, std::ostream& err) const {
        const auto c = study();
        if (export_prefix) {
            const sim::DatasetGenerator gen(harness::dataset_design(c));
            const auto data = gen.generate(c.r_grid.front(), c.n, harness::replicate_seed(c.seed, 0, 0));
            io::write_sample(data.x, *export_prefix + "_x.csv");
            io::write_sample(data.y, *export_prefix + "_y.csv");
            return 0;
        }
        std::ostream& summary = output ? out : err;
        harness::RunOptions opts;
        opts.workers = std::max(1u, workers);
        opts.timing = timing;
        opts.on_row = [&](const harness::PowerRow& row) {
            summary << "r=" << detail::format_double(row.r) << " rejections=" << row.rejections << "/" << row.reps
                    << " rate=" << detail::format_double(row.rate)
                    << " mean_tau=" << detail::format_double(row.mean_tau) << '\n';
        };
        const auto table = harness::run_study(c, opts);
        if (output) harness::write_results(table, std::filesystem::path(*output));
        else harness::write_results(table, out);
        return 0;
    }
};

// ---------------------------------------------------------------------------

struct ProfileCommand {
    std::string input;
    std::optional<std::string> output, thresholds;
    std::string preset = "children";
    double step = 10.0;

    void add(CLI::App& app) {
        app.add_option("--input", input, "CSV with one trajectory (per-minute readings) per row")->required();
        app.add_option("--preset", preset, "Threshold preset: " + activity::preset_names())->capture_default_str();
        app.add_option("--step", step, "Threshold spacing for presets")->capture_default_str();
        app.add_option("--thresholds", thresholds, "Explicit threshold range lo:hi:step");
        app.add_option("--output", output, "Profile CSV path (stdout when absent)");
    }

    std::vector<double> grid() const {
        if (!thresholds) return activity::threshold_preset(preset, step);
        const auto parts = detail::split(*thresholds, ':');
        if (parts.size() != 3) throw ValidationError("--thresholds expects lo:hi:step");
        std::array<double, 3> v{};
        for (std::size_t i = 0; i < 3; ++i) {
            const auto d = detail::parse_double(parts[i]);
            if (!d) throw ValidationError("--thresholds: not a number '" + std::string(parts[i]) + "'");
            v[i] = *d;
        }
        return activity::threshold_range(v[0], v[1], v[2]);
    }

    int run(std::ostream& out) const {
        const auto s = grid();
        const auto text = detail::read_file(input);
        const auto layout = make_layout({make_grid(Grid(s))}, 0);
        std::vector<HilbertPoint> rows;
        std::size_t lineno = 0;
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            const std::string_view line(text.data() + start, end - start);
            start = end + 1;
            ++lineno;
            if (detail::trim(line).empty()) continue;
            activity::ActivityTrajectory traj;
            const auto fields = detail::split(line);
            for (std::size_t c = 0; c < fields.size(); ++c) {
                const auto v = detail::parse_double(fields[c]);
                if (!v)
                    throw ValidationError(detail::location(input, lineno) + "column " + std::to_string(c + 1) +
                                          ": not a number '" + std::string(detail::trim(fields[c])) + "'");
                traj.readings.push_back(*v);
            }
            try {
                rows.emplace_back(layout, activity::activity_profile(traj, s).values);
            } catch (const ValidationError& e) {
                throw ValidationError(detail::location(input, lineno) + e.what());
            }
        }
        if (rows.empty()) throw ValidationError(input + ": no trajectories");
        const Sample profiles(std::move(rows));
        if (output) io::write_sample(profiles, *output);
        else io::write_sample_csv(profiles, out);
        return 0;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bootstrap max-statistic tests for functional linear models"};
    app.name("flmtest");
    app.require_subcommand(1);
    TestCommand test;
    SimulateCommand simulate;
    ProfileCommand profile;
    auto* t = app.add_subcommand("test", "Test for a null slope between a predictor and a response sample");
    auto* s = app.add_subcommand("simulate", "Monte Carlo size / power study");
    auto* p = app.add_subcommand("profile", "Activity profiles from per-minute readings");
    test.add(*t);
    simulate.add(*s);
    profile.add(*p);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    try {
        if (t->parsed()) return test.run(out);
        if (s->parsed()) return simulate.run(out, err);
        if (p->parsed()) return profile.run(out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kUsageFailure;
}

}  // namespace flm::cli
