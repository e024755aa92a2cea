#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gpm/analysis.hpp"
#include "gpm/bridging.hpp"
#include "gpm/contours.hpp"
#include "gpm/dynamics.hpp"
#include "json.hpp"

namespace gpm {

using json = nlohmann::json;

// Snapshot text: "GPM <L> <q>", then L lines of L space-separated 0-based
// colors, row y on line y + 1, each line ending in '\n'.
std::string format_snapshot(const Configuration& sigma);
// Throws std::runtime_error describing the first malformed token.
Configuration parse_snapshot(std::string_view text);
void write_snapshot(const std::filesystem::path& path, const Configuration& sigma);
Configuration read_snapshot(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Shortest round-trip decimal form of a double.
std::string format_number(double x);

// [{support, colors (0-based), contractible, cost}, ...]
json contours_to_json(const TorusLattice& lat, const ContourSet& contours, const CostMatrix& a);
// {bridges, contours, delta, components: [{vertices, label (0-based), impurity}]}
json bridge_system_to_json(const Configuration& sigma, const BridgeSystem& bs, const CostMatrix& a);
json sorted_report_to_json(const SortedReport& report);

// step,sweep,energy,n_1..n_q,boundary_size
std::string metrics_header(int q);
std::string metrics_row(const Sample& sample);

// index,code,configuration,energy,probability; configuration lists 0-based
// colors in vertex order.
std::string gibbs_table_csv(const GibbsTable& table);

using Rgb = std::array<std::uint8_t, 3>;
using Palette = std::vector<Rgb>;

// q hues spaced evenly around the color wheel.
Palette default_palette(int q);
// JSON array of [r, g, b] triples or "#rrggbb" strings.
Palette parse_palette(std::string_view text);

// Binary P6 image. Vertex (x, y) fills a cell x cell block whose top-left
// pixel sits at column (x cell + y cell / 2) mod (L cell) and row
// (L - 1 - y) cell, so rows are sheared half a cell per step and wrap
// horizontally like the torus.
std::string render_ppm(const Configuration& sigma, const Palette& palette, int cell = 4);

}  // namespace gpm
