#include "dendrite/csv.hpp"

#include "dendrite/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace dendrite {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

bool parse_number(std::string_view cell, double& out) {
    if (!cell.empty() && cell.front() == '+')
        cell.remove_prefix(1);
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        auto line = trim(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (!line.empty() && line.front() != '#')
            out.push_back(line);
        if (nl == std::string_view::npos)
            break;
        start = nl + 1;
    }
    return out;
}

} // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CoordsTable parse_coords_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty())
        throw FormatError("coordinate table is empty");
    const auto header = split_row(lines.front());
    int col_s = -1, col_dr = -1, col_u = -1;
    std::vector<int> col_angular;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = header[c];
        if (name == "s")
            col_s = static_cast<int>(c);
        else if (name == "dr")
            col_dr = static_cast<int>(c);
        else if (name == "u")
            col_u = static_cast<int>(c);
        else
            col_angular.push_back(static_cast<int>(c));
    }
    if (col_s < 0 || col_dr < 0 || col_angular.empty())
        throw FormatError("coordinate table header must name s, dr and at least one angular column (dphi)");

    std::vector<double> s, radial;
    std::vector<std::vector<double>> angular(col_angular.size());
    std::vector<double> branch_points;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split_row(lines[r]);
        if (cells.size() != header.size())
            throw FormatError("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                              " cells, header has " + std::to_string(header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (!parse_number(cells[c], row[c]))
                throw FormatError("row " + std::to_string(r + 1) + ": '" + std::string(cells[c]) +
                                  "' is not a number");
        s.push_back(row[col_s]);
        radial.push_back(row[col_dr]);
        for (std::size_t a = 0; a < col_angular.size(); ++a)
            angular[a].push_back(row[col_angular[a]]);
        if (col_u >= 0 && row[col_u] == 0.0)
            branch_points.push_back(row[col_s]);
    }
    if (s.size() < 2)
        throw FormatError("coordinate table needs at least two rows");
    const double ds = s[1] - s[0];
    if (!(ds > 0.0))
        throw FormatError("s column must be strictly increasing");
    for (std::size_t k = 1; k < s.size(); ++k)
        if (std::abs((s[k] - s[0]) - static_cast<double>(k) * ds) > 1e-6 * ds)
            throw FormatError("s column is not uniformly spaced at row " + std::to_string(k + 2) +
                              "; resample the input first");
    const SGrid grid = SGrid::from_count(s.front(), ds, s.size());
    return CoordsTable{DerivativeCoords(grid, std::move(radial), std::move(angular)), std::move(branch_points)};
}

CoordsTable load_coords_csv(const std::filesystem::path& path) {
    return parse_coords_csv(read_text_file(path));
}

std::vector<std::array<double, 2>> parse_polygon_csv(std::string_view text) {
    std::vector<std::array<double, 2>> pts;
    const auto lines = lines_of(text);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const auto cells = split_row(lines[r]);
        double x = 0.0, y = 0.0;
        if (cells.size() != 2 || !parse_number(cells[0], x) || !parse_number(cells[1], y)) {
            if (r == 0)
                continue; // header
            throw FormatError("polygon row " + std::to_string(r + 1) + " is not an 'x, y' pair");
        }
        pts.push_back({x, y});
    }
    return pts;
}

std::vector<std::array<double, 2>> load_polygon_csv(const std::filesystem::path& path) {
    return parse_polygon_csv(read_text_file(path));
}

} // namespace dendrite
