#include "flm/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "flm/parallel.hpp"
#include "flm/rng.hpp"
#include "text_util.hpp"

namespace flm::harness {

namespace {

std::vector<std::string> problems(const StudyConfig& c) {
    std::vector<std::string> out;
    if (c.n < 3) out.push_back("n must be >= 3, got " + std::to_string(c.n));
    if (c.r_grid.empty()) out.push_back("r_grid must not be empty");
    for (double r : c.r_grid)
        if (!(r >= 0.0) || !std::isfinite(r)) {
            out.push_back("r_grid values must be finite and >= 0, got " + std::to_string(r));
            break;
        }
    if (c.replications < 1) out.push_back("replications must be >= 1");
    if (c.bootstrap < 100) out.push_back("bootstrap must be >= 100, got " + std::to_string(c.bootstrap));
    if (!(c.significance > 0.0 && c.significance < 1.0))
        out.push_back("significance must lie in (0, 1), got " + std::to_string(c.significance));
    try {
        c.tau.validate();
    } catch (const DomainError& e) {
        out.push_back(std::string("tau: ") + e.what());
    }
    if (c.p1 && *c.p1 < 1) out.push_back("p1 must be >= 1");
    if (c.p2 && *c.p2 < 1) out.push_back("p2 must be >= 1");
    if (c.q < 1) out.push_back("q must be >= 1");
    if (c.k_trunc < 1) out.push_back("k_trunc must be >= 1");
    if (c.grid_points < 3) out.push_back("grid_points must be >= 3, got " + std::to_string(c.grid_points));
    try {
        c.matern.validate();
    } catch (const DomainError& e) {
        out.push_back(std::string("matern: ") + e.what());
    }
    if (c.noise) {
        try {
            c.noise->validate();
        } catch (const DomainError& e) {
            out.push_back(std::string("noise: ") + e.what());
        }
        const bool scalar_y = c.family == sim::Family::scalar_on_function;
        if (scalar_y != (c.noise->kind == sim::NoiseKind::scalar_laplace))
            out.push_back("noise kind " + std::string(sim::to_string(c.noise->kind)) + " does not fit family " +
                          std::string(sim::to_string(c.family)));
    }
    return out;
}

std::string joined(const std::vector<std::string>& lines, std::string_view head) {
    std::string msg(head);
    for (const auto& l : lines) msg += "\n  - " + l;
    return msg;
}

}  // namespace

std::vector<double> default_r_grid() {
    std::vector<double> g(11);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i) / 10.0;
    return g;
}

void StudyConfig::validate() const {
    const auto p = problems(*this);
    if (!p.empty()) throw ValidationError(joined(p, "invalid study configuration:"));
}

ReplicateError::ReplicateError(std::size_t r_index, std::size_t replicate, const std::string& what)
    : Error("replicate " + std::to_string(replicate) + " at r index " + std::to_string(r_index) + ": " + what),
      r_index_(r_index),
      replicate_(replicate) {}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t r_index, std::size_t rep) noexcept {
    return rng::derive(master, {r_index, rep});
}

sim::DatasetSpec dataset_design(const StudyConfig& c) {
    sim::DatasetSpec d;
    d.slope.family = c.family;
    d.slope.variant = c.variant;
    d.slope.k_trunc = c.k_trunc;
    d.slope.q = c.q;
    d.noise = c.noise;
    d.matern = c.matern;
    d.grid_points = c.grid_points;
    d.n = c.n;
    d.seed = c.seed;
    d.design_seed = c.seed;
    return d;
}

TestConfig test_config(const StudyConfig& c, std::uint64_t rep_seed) {
    TestConfig t;
    t.p1 = c.p1;
    t.p2 = c.p2;
    t.tau = c.tau;
    t.b = c.bootstrap;
    t.significance = c.significance;
    t.seed = rng::derive(rep_seed, {rng::tag::test});
    t.basis = c.basis;
    t.workers = 1;
    return t;
}

PowerTable run_study(const StudyConfig& config, const RunOptions& options) {
    config.validate();
    const sim::DatasetGenerator generator(dataset_design(config));
    const std::size_t reps = config.replications;

    PowerTable table;
    for (std::size_t ri = 0; ri < config.r_grid.size(); ++ri) {
        const double r = config.r_grid[ri];
        const auto start = std::chrono::steady_clock::now();
        std::vector<unsigned char> rejected(reps, 0);
        std::vector<double> taus(reps, 0.0);
        parallel_for(reps, options.workers, [&](std::size_t k) {
            try {
                const std::uint64_t seed = replicate_seed(config.seed, ri, k);
                const auto data = generator.generate(r, config.n, seed);
                const auto res = run_test(data.x, data.y, test_config(config, seed));
                rejected[k] = res.reject ? 1 : 0;
                taus[k] = res.tau;
            } catch (const std::exception& e) {
                throw ReplicateError(ri, k, e.what());
            }
        });
        PowerRow row;
        row.r = r;
        row.reps = reps;
        for (std::size_t k = 0; k < reps; ++k) {
            row.rejections += rejected[k];
            row.mean_tau += taus[k];
        }
        row.mean_tau /= static_cast<double>(reps);
        row.rate = static_cast<double>(row.rejections) / static_cast<double>(reps);
        if (options.timing)
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        table.rows.push_back(row);
        if (options.on_row) options.on_row(row);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Results CSV

namespace {
constexpr std::string_view kHeader = "r,rejections,reps,rate,mean_tau,seconds";
}

void write_results(const PowerTable& table, std::ostream& out) {
    using detail::format_double;
    out << kHeader << '\n';
    for (const auto& row : table.rows)
        out << format_double(row.r) << ',' << row.rejections << ',' << row.reps << ',' << format_double(row.rate)
            << ',' << format_double(row.mean_tau) << ',' << format_double(row.seconds) << '\n';
}

void write_results(const PowerTable& table, const std::filesystem::path& path) {
    auto out = detail::open_for_writing(path);
    write_results(table, out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

PowerTable read_results(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || detail::trim(line) != kHeader)
        throw ValidationError(detail::location(source, 1) + "expected header '" + std::string(kHeader) + "'");
    PowerTable table;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        const auto where = detail::location(source, lineno);
        if (f.size() != 6)
            throw ValidationError(where + "expected 6 fields, found " + std::to_string(f.size()));
        PowerRow row;
        const auto r = detail::parse_double(f[0]);
        const auto rej = detail::parse_integer<std::size_t>(f[1]);
        const auto reps = detail::parse_integer<std::size_t>(f[2]);
        const auto rate = detail::parse_double(f[3]);
        const auto tau = detail::parse_double(f[4]);
        const auto sec = detail::parse_double(f[5]);
        if (!r || !rej || !reps || !rate || !tau || !sec) throw ValidationError(where + "malformed number");
        row.r = *r;
        row.rejections = *rej;
        row.reps = *reps;
        row.rate = *rate;
        row.mean_tau = *tau;
        row.seconds = *sec;
        if (row.rejections > row.reps) throw ValidationError(where + "rejections exceed reps");
        table.rows.push_back(row);
    }
    return table;
}

PowerTable read_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return read_results(in, path.string());
}

// ---------------------------------------------------------------------------
// JSON configuration

namespace {

using nlohmann::json;

struct ConfigReader {
    const json& doc;
    std::vector<std::string>& errors;

    template <class T>
    std::optional<T> count(const json& v, const std::string& key) {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
            errors.push_back(key + ": expected a non-negative integer");
            return std::nullopt;
        }
        return static_cast<T>(v.get<std::uint64_t>());
    }

    std::optional<double> real(const json& v, const std::string& key) {
        if (!v.is_number()) {
            errors.push_back(key + ": expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<std::vector<double>> reals(const json& v, const std::string& key) {
        if (!v.is_array()) {
            errors.push_back(key + ": expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                errors.push_back(key + ": expected an array of numbers");
                return std::nullopt;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::optional<std::string> text(const json& v, const std::string& key) {
        if (!v.is_string()) {
            errors.push_back(key + ": expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    bool object(const json& v, const std::string& key) {
        if (!v.is_object()) {
            errors.push_back(key + ": expected an object");
            return false;
        }
        return true;
    }

    void unknown(const std::string& key, const std::string& allowed) {
        errors.push_back("unknown key '" + key + "' (allowed: " + allowed + ")");
    }
};

}  // namespace

StudyConfig parse_study_config(std::string_view json_text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(source) + ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw ValidationError(std::string(source) + ": top level must be a JSON object");

    StudyConfig c;
    std::vector<std::string> errors;
    ConfigReader rd{doc, errors};
    const std::string top_keys =
        "family, variant, n, r_grid, replications, bootstrap, significance, tau, p1, p2, seed, q, k_trunc, "
        "grid_points, matern, noise, basis";

    for (const auto& [key, v] : doc.items()) {
        if (key == "family") {
            if (auto s = rd.text(v, key)) {
                if (auto f = sim::parse_family(*s)) c.family = *f;
                else errors.push_back("unknown family '" + *s + "' (valid: " + sim::family_names() + ")");
            }
        } else if (key == "variant") {
            if (auto s = rd.text(v, key)) {
                if (auto f = sim::parse_variant(*s)) c.variant = *f;
                else errors.push_back("unknown variant '" + *s + "' (valid: " + sim::variant_names() + ")");
            }
        } else if (key == "n") {
            if (auto x = rd.count<std::size_t>(v, key)) c.n = *x;
        } else if (key == "r_grid") {
            if (auto x = rd.reals(v, key)) c.r_grid = *x;
        } else if (key == "replications") {
            if (auto x = rd.count<std::size_t>(v, key)) c.replications = *x;
        } else if (key == "bootstrap") {
            if (auto x = rd.count<std::size_t>(v, key)) c.bootstrap = *x;
        } else if (key == "significance") {
            if (auto x = rd.real(v, key)) c.significance = *x;
        } else if (key == "tau") {
            if (v.is_number()) {
                c.tau = TauPolicy::fixed(v.get<double>());
            } else if (rd.object(v, key)) {
                TauPolicy p;
                for (const auto& [k2, v2] : v.items()) {
                    if (k2 == "grid") {
                        if (auto x = rd.reals(v2, "tau.grid")) p.grid = *x;
                    } else if (k2 == "inner_b") {
                        if (auto x = rd.count<std::size_t>(v2, "tau.inner_b")) p.inner_b = *x;
                    } else {
                        rd.unknown("tau." + k2, "grid, inner_b");
                    }
                }
                c.tau = p;
            }
        } else if (key == "p1" || key == "p2") {
            auto& slot = key == "p1" ? c.p1 : c.p2;
            if (v.is_null()) slot.reset();
            else if (auto x = rd.count<std::size_t>(v, key)) slot = *x;
        } else if (key == "seed") {
            if (auto x = rd.count<std::uint64_t>(v, key)) c.seed = *x;
        } else if (key == "q") {
            if (auto x = rd.count<std::size_t>(v, key)) c.q = *x;
        } else if (key == "k_trunc") {
            if (auto x = rd.count<std::size_t>(v, key)) c.k_trunc = *x;
        } else if (key == "grid_points") {
            if (auto x = rd.count<std::size_t>(v, key)) c.grid_points = *x;
        } else if (key == "matern") {
            if (rd.object(v, key)) {
                for (const auto& [k2, v2] : v.items()) {
                    double* slot = k2 == "nu" ? &c.matern.nu : k2 == "rho" ? &c.matern.rho
                                 : k2 == "sigma" ? &c.matern.sigma : nullptr;
                    if (!slot) rd.unknown("matern." + k2, "nu, rho, sigma");
                    else if (auto x = rd.real(v2, "matern." + k2)) *slot = *x;
                }
            }
        } else if (key == "noise") {
            if (rd.object(v, key)) {
                sim::NoiseSpec ns = sim::default_noise(c.family);
                for (const auto& [k2, v2] : v.items()) {
                    if (k2 == "kind") {
                        if (auto s = rd.text(v2, "noise.kind")) {
                            if (auto k = sim::parse_noise_kind(*s)) {
                                ns.kind = *k;
                            } else {
                                errors.push_back("unknown noise kind '" + *s +
                                                 "' (valid: scalar_laplace, functional_laplace)");
                            }
                        }
                    } else if (k2 == "k_terms") {
                        if (auto x = rd.count<std::size_t>(v2, "noise.k_terms")) ns.k_terms = *x;
                    } else if (k2 == "decay") {
                        if (auto x = rd.real(v2, "noise.decay")) ns.decay = *x;
                    } else {
                        rd.unknown("noise." + k2, "kind, k_terms, decay");
                    }
                }
                c.noise = ns;
            }
        } else if (key == "basis") {
            if (auto s = rd.text(v, key)) {
                if (*s == "empirical") c.basis = BasisChoice::empirical;
                else if (*s == "fourier") c.basis = BasisChoice::fourier;
                else errors.push_back("unknown basis '" + *s + "' (valid: empirical, fourier)");
            }
        } else {
            rd.unknown(key, top_keys);
        }
    }
    // The default noise kind depends on the family, which may come after "noise" in the document.
    if (c.noise && doc.contains("noise") && doc["noise"].is_object() && !doc["noise"].contains("kind"))
        c.noise->kind = sim::default_noise(c.family).kind;

    for (auto& p : problems(c)) errors.push_back(std::move(p));
    if (!errors.empty()) throw ValidationError(joined(errors, std::string(source) + ": invalid study configuration:"));
    return c;
}

StudyConfig read_study_config(const std::filesystem::path& path) {
    return parse_study_config(detail::read_file(path), path.string());
}

}  // namespace flm::harness
