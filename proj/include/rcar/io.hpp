// File formats: panel CSV (row,col,value) with a JSON sidecar carrying the
// simulation metadata, samples/kde CSVs, a minimal SVG line plot, and the
// flat key=value config format.

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcar/panel.hpp"

namespace rcar {

inline constexpr const char* kFormatVersion = "1";

nlohmann::json mixing_to_json(const MixingLaw& m);
MixingLaw mixing_from_json(const nlohmann::json& j);
nlohmann::json innovation_to_json(const InnovationLaw& l);
InnovationLaw innovation_from_json(const nlohmann::json& j);

// Writes <prefix>.csv (header row,col,value) and <prefix>.json.  Values are
// printed with 17 significant digits, so reading the CSV back reproduces
// the in-memory doubles bit for bit.
void write_panel(const Panel& panel, const std::string& path_prefix);

// Reads a panel CSV plus its sidecar (same path with .csv replaced by .json).
Panel read_panel(const std::string& csv_path);

void write_samples_csv(const std::string& path, const std::vector<double>& samples);

// Columns: x, kde, reference_density (third column omitted when empty).
void write_kde_csv(const std::string& path, const std::vector<double>& grid,
                   const std::vector<double>& kde, const std::vector<double>& reference);

void write_text(const std::string& path, const std::string& content);

// Minimal line plot; one polyline per series over the shared x grid.
void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<std::vector<double>>& series,
                    const std::vector<std::string>& labels);

// Flat key=value file with optional [section] headers; keys inside a
// section come back as "section.key".  '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path);

}  // namespace rcar
