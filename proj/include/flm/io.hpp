#pragma once

// Sample files, test-result JSON and eigensystem export.
//
// Functional CSV: first row the grid, then one observation per row.
// Scalar CSV: one observation (q values) per row, no header.
// JSON: {"grid": [...], "rows": [[...], ...], "scalars": [[...], ...]};
// either part may be absent, not both.
// Numbers are written in shortest round-trip form, so export followed by
// import reproduces every value exactly.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "flm/fpca.hpp"
#include "flm/hilbert.hpp"
#include "flm/maxtest.hpp"

namespace flm::io {

Sample parse_functional_csv(std::string_view text, std::string_view source = "<input>");
Sample parse_scalar_csv(std::string_view text, std::string_view source = "<input>");
Sample parse_sample_json(std::string_view text, std::string_view source = "<input>");

/// Reads a sample from `path` (JSON when the extension is .json, functional
/// CSV otherwise) and, if given, a scalar CSV whose rows are appended to the
/// observations as a direct sum. With only `scalars_path`, the sample is
/// scalar-valued.
Sample read_sample(const std::optional<std::filesystem::path>& path,
                   const std::optional<std::filesystem::path>& scalars_path);

/// Functional CSV for single-component samples, scalar CSV for scalar-only ones.
void write_sample_csv(const Sample& sample, std::ostream& out);
void write_sample_json(const Sample& sample, std::ostream& out);
void write_sample(const Sample& sample, const std::filesystem::path& path);

std::string test_result_json(const TestResult& result);

/// Header row "eigenvalue" + coordinate labels, then one row per element.
void write_eigensystem_csv(const EigenSystem& system, std::ostream& out);

}  // namespace flm::io
