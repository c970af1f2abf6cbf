#pragma once

#include "dendrite/curve.hpp"

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace dendrite {

/// Derivative coordinates read from a table `s, dr, dphi[, dpsi, ...][, u]`.
/// Rows with u == 0 mark branch points.
struct CoordsTable {
    DerivativeCoords coords;
    std::vector<double> branch_points;
};

CoordsTable parse_coords_csv(std::string_view text);
CoordsTable load_coords_csv(const std::filesystem::path& path);

/// Closed 2D polyline, one `x, y` pair per row (an optional header row is skipped).
std::vector<std::array<double, 2>> parse_polygon_csv(std::string_view text);
std::vector<std::array<double, 2>> load_polygon_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

} // namespace dendrite
