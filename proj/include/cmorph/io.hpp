#pragma once

#include <iosfwd>
#include <string>

#include "cmorph/raster.hpp"

namespace cmorph {

struct AsciiGridHeader {
    int ncols = 0;
    int nrows = 0;
    double xllcorner = 0.0;
    double yllcorner = 0.0;
    double cellsize = 1.0;
    double nodata_value = -1.0;
};

struct AsciiGrid {
    AsciiGridHeader header;
    ElevationGrid grid;
};

// ESRI ASCII grid. Header keys are case-insensitive but must come in the order
// ncols, nrows, xllcorner, yllcorner, cellsize, nodata_value. One payload row
// per line, top row first. `source` names the input in diagnostics.
AsciiGrid read_ascii_grid(std::istream& in, const std::string& source);
AsciiGrid read_ascii_grid(const std::string& path);

// Values are written with 6 significant digits. ncols/nrows come from the grid.
void write_ascii_grid(const ElevationGrid& grid, std::ostream& out, const AsciiGridHeader& header = {});
void write_ascii_grid(const ElevationGrid& grid, const std::string& path, const AsciiGridHeader& header = {});

// 16-bit binary PGM, [min, max] scaled linearly onto [0, 65535].
void render_heightmap(const ElevationGrid& grid, std::ostream& out);
void render_heightmap(const ElevationGrid& grid, const std::string& path);

} // namespace cmorph
