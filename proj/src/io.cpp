#include "isofokker/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isofokker {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_csv(const Grid1D& grid, const std::vector<CsvColumn>& columns) {
    for (const auto& c : columns) {
        if (!(c.values.grid() == grid)) throw std::invalid_argument("format_csv: column '" + c.name + "' is on another grid");
    }
    std::string out = "x";
    for (const auto& c : columns) out += "," + c.name;
    out += '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_number(grid.x(i));
        for (const auto& c : columns) out += "," + format_number(c.values[i]);
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const Grid1D& grid, const std::vector<CsvColumn>& columns) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << format_csv(grid, columns);
    if (!f) throw std::runtime_error("failed writing " + path);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read " + path);
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t j = 0; j < cells.size(); ++j) numeric = numeric && parse_double(cells[j], row[j]);
        if (!numeric) {
            if (table.columns.empty() && table.names.empty()) {
                table.names = cells;
                continue;
            }
            std::ostringstream os;
            os << path << ":" << lineno << ": malformed row '" << line << "'";
            throw std::invalid_argument(os.str());
        }
        if (table.columns.empty()) table.columns.resize(row.size());
        if (row.size() != table.columns.size() || (!table.names.empty() && row.size() != table.names.size())) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected " << table.columns.size() << " columns, got " << row.size();
            throw std::invalid_argument(os.str());
        }
        for (std::size_t j = 0; j < row.size(); ++j) table.columns[j].push_back(row[j]);
    }
    if (table.columns.empty()) throw std::invalid_argument(path + ": no data rows");
    return table;
}

Grid1D grid_from_nodes(const std::vector<double>& x) {
    if (x.size() < 3 || x.size() % 2 == 0) {
        std::ostringstream os;
        os << "grid needs an odd number (>= 3) of nodes, got " << x.size();
        throw std::invalid_argument(os.str());
    }
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    if (!(h > 0.0)) throw std::invalid_argument("grid nodes must be strictly increasing");
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double expect = x.front() + static_cast<double>(i) * h;
        if (!std::isfinite(x[i]) || std::abs(x[i] - expect) > 1e-9 * h * std::max(1.0, static_cast<double>(i))) {
            std::ostringstream os;
            os << "grid nodes are not uniformly spaced (node " << i << " is " << x[i] << ", expected " << expect << ")";
            throw std::invalid_argument(os.str());
        }
    }
    return Grid1D(x.front(), x.back(), x.size());
}

} // namespace isofokker
