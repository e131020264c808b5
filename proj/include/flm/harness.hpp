#pragma once

// Monte Carlo size / power studies over a grid of signal strengths.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flm/error.hpp"
#include "flm/maxtest.hpp"
#include "flm/simgen.hpp"
#include "flm/tau_policy.hpp"

namespace flm::harness {

std::vector<double> default_r_grid();  // 0, 0.1, ..., 1

struct StudyConfig {
    sim::Family family = sim::Family::scalar_on_function;
    sim::Variant variant = sim::Variant::sparse;
    std::size_t n = 50;
    std::vector<double> r_grid = default_r_grid();
    std::size_t replications = 1000;
    std::size_t bootstrap = 1000;
    double significance = 0.05;
    TauPolicy tau;
    std::optional<std::size_t> p1;  // default: n (capped at rank), q for vector spaces
    std::optional<std::size_t> p2;
    std::uint64_t seed = 0;

    // Design knobs with the usual defaults.
    std::size_t q = 5;
    std::size_t k_trunc = 100;
    std::size_t grid_points = 101;
    sim::MaternSpec matern;
    std::optional<sim::NoiseSpec> noise;
    BasisChoice basis = BasisChoice::empirical;

    /// Throws ValidationError listing every violated constraint.
    void validate() const;
};

struct PowerRow {
    double r = 0.0;
    std::size_t rejections = 0;
    std::size_t reps = 0;
    double rate = 0.0;
    double mean_tau = 0.0;
    double seconds = 0.0;

    friend bool operator==(const PowerRow&, const PowerRow&) = default;
};

struct PowerTable {
    std::vector<PowerRow> rows;

    friend bool operator==(const PowerTable&, const PowerTable&) = default;
};

struct RunOptions {
    unsigned workers = 1;
    /// Wall time per row; left at 0 otherwise so tables are reproducible.
    bool timing = false;
    std::function<void(const PowerRow&)> on_row;
};

/// A replicate failed; carries where.
class ReplicateError : public Error {
public:
    ReplicateError(std::size_t r_index, std::size_t replicate, const std::string& what);
    std::size_t r_index() const noexcept { return r_index_; }
    std::size_t replicate() const noexcept { return replicate_; }

private:
    std::size_t r_index_;
    std::size_t replicate_;
};

/// Seed of replicate `rep` at r-grid position `r_index`.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t r_index, std::size_t rep) noexcept;

/// Runs R replications of (generate_dataset, run_test) for every r in the
/// grid and tallies rejections. Replications run on `options.workers`
/// threads, each test single-threaded; the table does not depend on the
/// worker count.
PowerTable run_study(const StudyConfig& config, const RunOptions& options = {});

/// The dataset design used by a study (without n / seed / r).
sim::DatasetSpec dataset_design(const StudyConfig& config);
TestConfig test_config(const StudyConfig& config, std::uint64_t replicate_seed);

void write_results(const PowerTable& table, std::ostream& out);
void write_results(const PowerTable& table, const std::filesystem::path& path);
PowerTable read_results(std::istream& in, std::string_view source = "<stream>");
PowerTable read_results(const std::filesystem::path& path);

/// Parses a JSON study configuration. Keys mirror the StudyConfig field
/// names; tau is either a number (fixed) or an object
/// {"grid": [...], "inner_b": k}. Every problem is reported in one
/// ValidationError.
StudyConfig parse_study_config(std::string_view json_text, std::string_view source = "<config>");
StudyConfig read_study_config(const std::filesystem::path& path);

}  // namespace flm::harness
