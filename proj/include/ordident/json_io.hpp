#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ordident/characterization.hpp"
#include "ordident/distributions.hpp"
#include "ordident/gof.hpp"
#include "ordident/verify.hpp"

namespace ordident {

// Canonical report payloads: ordered_json keeps insertion order, so equal
// inputs serialize byte-identically. No timestamps anywhere.
using ordered_json = nlohmann::ordered_json;

// Shortest-precise decimal for CSV and text payloads ("%.17g").
std::string fmt17(double x);

ordered_json dist_to_json(const Distribution& d);
Distribution dist_from_json(const ordered_json& j);

ordered_json grid_to_json(const GridSpec& g);

ordered_json report_to_json(const VerificationReport& r);
std::string verification_csv_header();
std::string verification_csv_row(const VerificationReport& r);

ordered_json report_to_json(const TestReport& r);
ordered_json report_to_json(const CalibrationSummary& s);

// Two-column CSV "y,F" with full-precision values.
std::string grid_function_csv(const GridFunction& f);
GridFunction grid_function_from_csv(const std::string& text);

// Data files: one value per line; a single leading non-numeric line is
// tolerated as a header.
std::vector<double> parse_value_lines(const std::string& text);

// Writes through a sibling temp file and renames, so readers never see a
// half-written report.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace ordident
