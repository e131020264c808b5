#include "flm/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "flm/error.hpp"
#include "text_util.hpp"

namespace flm::io {

namespace {

using detail::location;

// Non-blank lines with their one-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++lineno;
        const auto line = text.substr(start, end - start);
        if (!detail::trim(line).empty()) out.emplace_back(lineno, line);
        start = end + 1;
    }
    return out;
}

std::vector<double> numbers(std::string_view line, std::size_t lineno, std::string_view source) {
    const auto fields = detail::split(line);
    std::vector<double> out;
    out.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
        const auto v = detail::parse_double(fields[c]);
        if (!v)
            throw ValidationError(location(source, lineno) + "column " + std::to_string(c + 1) + ": not a number '" +
                                  std::string(detail::trim(fields[c])) + "'");
        if (!std::isfinite(*v))
            throw ValidationError(location(source, lineno) + "column " + std::to_string(c + 1) + ": non-finite value");
        out.push_back(*v);
    }
    return out;
}

GridPtr checked_grid(std::vector<double> pts, const std::string& where) {
    try {
        return make_grid(Grid(std::move(pts)));
    } catch (const Error& e) {
        throw ValidationError(where + "invalid grid: " + e.what());
    }
}

void put_row(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << detail::format_double(values[i]);
    }
    out << '\n';
}

Sample combine(Sample functional, Sample scalars, std::string_view fsrc, std::string_view ssrc) {
    if (functional.size() != scalars.size())
        throw ValidationError(std::string(fsrc) + " has " + std::to_string(functional.size()) + " observations but " +
                              std::string(ssrc) + " has " + std::to_string(scalars.size()));
    return direct_sum(functional, scalars);
}

}  // namespace

Sample parse_functional_csv(std::string_view text, std::string_view source) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw ValidationError(std::string(source) + ": empty file (expected a grid row)");
    auto grid = checked_grid(numbers(lines[0].second, lines[0].first, source), location(source, lines[0].first));
    const auto layout = make_layout({grid}, 0);
    std::vector<HilbertPoint> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto v = numbers(lines[i].second, lines[i].first, source);
        if (v.size() != grid->size())
            throw ValidationError(location(source, lines[i].first) + "expected " + std::to_string(grid->size()) +
                                  " values (one per grid point), found " + std::to_string(v.size()));
        rows.emplace_back(layout, std::move(v));
    }
    if (rows.empty()) throw ValidationError(std::string(source) + ": no observations after the grid row");
    return Sample(std::move(rows));
}

Sample parse_scalar_csv(std::string_view text, std::string_view source) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw ValidationError(std::string(source) + ": empty file");
    std::vector<HilbertPoint> rows;
    LayoutPtr layout;
    for (const auto& [lineno, line] : lines) {
        auto v = numbers(line, lineno, source);
        if (!layout) layout = make_layout({}, v.size());
        if (v.size() != layout->dim())
            throw ValidationError(location(source, lineno) + "expected " + std::to_string(layout->dim()) +
                                  " values, found " + std::to_string(v.size()));
        rows.emplace_back(layout, std::move(v));
    }
    return Sample(std::move(rows));
}

Sample parse_sample_json(std::string_view text, std::string_view source) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(source) + ": malformed JSON: " + e.what());
    }
    const std::string src(source);
    if (!doc.is_object()) throw ValidationError(src + ": expected an object with grid/rows/scalars");
    for (const auto& [key, _] : doc.items())
        if (key != "grid" && key != "rows" && key != "scalars")
            throw ValidationError(src + ": unknown key '" + key + "' (allowed: grid, rows, scalars)");

    auto vector_at = [&](const json& v, const std::string& path) {
        if (!v.is_array()) throw ValidationError(src + ": " + path + " must be an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ValidationError(src + ": " + path + "[" + std::to_string(i) + "] is not a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    };
    auto matrix_at = [&](const json& v, const std::string& path) {
        if (!v.is_array()) throw ValidationError(src + ": " + path + " must be an array of arrays");
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vector_at(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    };

    std::optional<Sample> functional;
    std::optional<Sample> scalars;
    if (doc.contains("grid") || doc.contains("rows")) {
        if (!doc.contains("grid") || !doc.contains("rows"))
            throw ValidationError(src + ": grid and rows must be given together");
        auto grid = checked_grid(vector_at(doc["grid"], "grid"), src + ": ");
        const auto layout = make_layout({grid}, 0);
        std::vector<HilbertPoint> pts;
        const auto rows = matrix_at(doc["rows"], "rows");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != grid->size())
                throw ValidationError(src + ": rows[" + std::to_string(i) + "] has " + std::to_string(rows[i].size()) +
                                      " values, grid has " + std::to_string(grid->size()));
            pts.emplace_back(layout, rows[i]);
        }
        if (pts.empty()) throw ValidationError(src + ": rows is empty");
        functional = Sample(std::move(pts));
    }
    if (doc.contains("scalars")) {
        const auto rows = matrix_at(doc["scalars"], "scalars");
        if (rows.empty()) throw ValidationError(src + ": scalars is empty");
        const auto layout = make_layout({}, rows[0].size());
        std::vector<HilbertPoint> pts;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size())
                throw ValidationError(src + ": scalars[" + std::to_string(i) + "] has " +
                                      std::to_string(rows[i].size()) + " values, expected " +
                                      std::to_string(rows[0].size()));
            pts.emplace_back(layout, rows[i]);
        }
        scalars = Sample(std::move(pts));
    }
    if (functional && scalars) return combine(*functional, *scalars, src + " rows", src + " scalars");
    if (functional) return *functional;
    if (scalars) return *scalars;
    throw ValidationError(src + ": neither rows nor scalars present");
}

Sample read_sample(const std::optional<std::filesystem::path>& path,
                   const std::optional<std::filesystem::path>& scalars_path) {
    std::optional<Sample> main;
    if (path) {
        const auto text = detail::read_file(*path);
        main = path->extension() == ".json" ? parse_sample_json(text, path->string())
                                            : parse_functional_csv(text, path->string());
    }
    if (!scalars_path) {
        if (!main) throw ValidationError("no input file given");
        return *main;
    }
    Sample extra = parse_scalar_csv(detail::read_file(*scalars_path), scalars_path->string());
    if (!main) return extra;
    return combine(*main, extra, path->string(), scalars_path->string());
}

void write_sample_csv(const Sample& sample, std::ostream& out) {
    if (sample.empty()) throw DomainError("cannot write an empty sample");
    const Layout& lay = sample.layout();
    const bool functional = lay.functional_count() == 1 && lay.scalar_dim() == 0;
    const bool scalar = lay.functional_count() == 0;
    if (!functional && !scalar)
        throw DomainError("CSV export covers single-function or scalar-only samples; use JSON for direct sums");
    if (functional) put_row(out, lay.grid(0).points());
    for (const auto& x : sample.elements()) put_row(out, x.coords());
}

void write_sample_json(const Sample& sample, std::ostream& out) {
    if (sample.empty()) throw DomainError("cannot write an empty sample");
    const Layout& lay = sample.layout();
    if (lay.functional_count() > 1) throw DomainError("JSON export supports at most one functional component");
    auto list = [&](std::span<const double> v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += detail::format_double(v[i]);
        }
        return s + "]";
    };
    out << '{';
    bool first = true;
    if (lay.functional_count() == 1) {
        out << "\"grid\":" << list(lay.grid(0).points()) << ",\"rows\":[";
        for (std::size_t i = 0; i < sample.size(); ++i) out << (i ? "," : "") << list(sample[i].functional_part(0));
        out << ']';
        first = false;
    }
    if (lay.scalar_dim() > 0) {
        out << (first ? "" : ",") << "\"scalars\":[";
        for (std::size_t i = 0; i < sample.size(); ++i) out << (i ? "," : "") << list(sample[i].scalar_part());
        out << ']';
    }
    out << "}\n";
}

void write_sample(const Sample& sample, const std::filesystem::path& path) {
    auto out = detail::open_for_writing(path);
    if (path.extension() == ".json") write_sample_json(sample, out);
    else write_sample_csv(sample, out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string test_result_json(const TestResult& r) {
    nlohmann::ordered_json j;
    j["t_u"] = r.t_u;
    j["t_l"] = r.t_l;
    j["q_m"] = r.quantiles.q_m;
    j["q_l"] = r.quantiles.q_l;
    j["tau"] = r.tau;
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    auto sci = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < r.sci.rows(); ++i) sci.push_back({r.sci(i, 0), r.sci(i, 1)});
    j["sci"] = std::move(sci);
    j["p1"] = r.p1;
    j["p2"] = r.p2;
    j["b"] = r.quantiles.b;
    j["significance"] = r.significance;
    j["seed"] = r.seed;
    return j.dump(2) + "\n";
}

void write_eigensystem_csv(const EigenSystem& system, std::ostream& out) {
    if (system.empty()) {
        out << "eigenvalue\n";
        return;
    }
    const Layout& lay = system.eigenelements.front().layout();
    out << "eigenvalue";
    for (std::size_t k = 0; k < lay.functional_count(); ++k)
        for (double t : lay.grid(k).points()) out << ",f" << k << ':' << detail::format_double(t);
    for (std::size_t j = 0; j < lay.scalar_dim(); ++j) out << ",s" << j;
    out << '\n';
    for (std::size_t i = 0; i < system.count(); ++i) {
        const double ev = i < system.eigenvalues.size() ? system.eigenvalues[i] : std::nan("");
        out << (std::isnan(ev) ? std::string() : detail::format_double(ev));
        for (double v : system.eigenelements[i].coords()) out << ',' << detail::format_double(v);
        out << '\n';
    }
}

}  // namespace flm::io
