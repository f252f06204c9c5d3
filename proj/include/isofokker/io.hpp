#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isofokker/grid.hpp"

namespace isofokker {

struct CsvColumn {
    std::string name;
    GridFunction values;
};

/// Header row "x,<names...>", then one row per node, 17 significant digits.
/// All columns must live on `grid`.
std::string format_csv(const Grid1D& grid, const std::vector<CsvColumn>& columns);
/// Writes format_csv to `path`; throws std::runtime_error if the file cannot be written.
void write_csv(const std::string& path, const Grid1D& grid, const std::vector<CsvColumn>& columns);

/// Numeric table with an optional header row (empty names if absent).
struct CsvTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

/// Throws std::invalid_argument on ragged or non-numeric rows.
CsvTable read_csv(const std::string& path);

/// Grid whose nodes are `x`; throws std::invalid_argument unless x is
/// uniformly spaced (to 1e-9 relative to the spacing) with an odd count >= 3.
Grid1D grid_from_nodes(const std::vector<double>& x);

/// Shortest round-trip representation with 17 significant digits.
std::string format_number(double v);

} // namespace isofokker
