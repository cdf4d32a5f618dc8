#include "chemostab/io.hpp"

#include <fstream>
#include <sstream>

#include "chemostab/error.hpp"
#include "chemostab/numeric.hpp"

namespace chemostab {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("malformed number '" + s + "' in " + path.string());
    }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

void write_field_csv(const std::filesystem::path& path, const Grid& grid,
                     std::span<const double> values) {
    std::ofstream out = open_for_write(path);
    out << (grid.dim == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            out << format_double(grid.x(i)) << ',';
            if (grid.dim == 2) out << format_double(grid.y(j)) << ',';
            out << format_double(values[grid.index(i, j)]) << '\n';
        }
}

std::vector<double> read_field_csv(const std::filesystem::path& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open field file " + path.string());
    std::string line;
    std::getline(in, line);
    const std::size_t columns = grid.dim == 1 ? 2 : 3;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != columns)
            throw ConfigError("field file " + path.string() + ": wrong column count");
        values.push_back(parse_double(cells.back(), path));
    }
    if (values.size() != grid.cells())
        throw ConfigError("field file " + path.string() + ": expected " +
                          std::to_string(grid.cells()) + " rows");
    return values;
}

std::string diagnostics_row(const Diagnostics& d) {
    std::string row;
    for (double v : {d.time, d.du_inf, d.dv_inf, d.dw_inf, d.min_u, d.min_v, d.min_w, d.mass_u,
                     d.mass_v, d.mass_w, d.grad_w2}) {
        if (!row.empty()) row += ',';
        row += format_double(v);
    }
    return row;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<Diagnostics>& rows) {
    std::ofstream out = open_for_write(path);
    out << kDiagnosticsHeader << '\n';
    for (const Diagnostics& d : rows) out << diagnostics_row(d) << '\n';
}

std::vector<Diagnostics> read_diagnostics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open diagnostics file " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != kDiagnosticsHeader)
        throw ConfigError("diagnostics file " + path.string() + ": unexpected header");
    std::vector<Diagnostics> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 11)
            throw ConfigError("diagnostics file " + path.string() + ": wrong column count");
        std::vector<double> v;
        for (const auto& c : cells) v.push_back(parse_double(c, path));
        Diagnostics d;
        d.time = v[0];
        d.du_inf = v[1];
        d.dv_inf = v[2];
        d.dw_inf = v[3];
        d.min_u = v[4];
        d.min_v = v[5];
        d.min_w = v[6];
        d.mass_u = v[7];
        d.mass_v = v[8];
        d.mass_w = v[9];
        d.grad_w2 = v[10];
        rows.push_back(d);
    }
    return rows;
}

std::string energy_row(const EnergyRecord& r) {
    std::string row;
    for (double v : {r.time, r.A, r.B, r.C, r.E, r.dist_u2, r.dist_v2, r.dist_w2, r.grad_w2}) {
        if (!row.empty()) row += ',';
        row += format_double(v);
    }
    row += ',';
    if (r.E_rate) row += format_double(*r.E_rate);
    return row;
}

}  // namespace chemostab
