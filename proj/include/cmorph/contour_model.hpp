#pragma once

#include <cstdint>
#include <vector>

#include "cmorph/raster.hpp"

namespace cmorph {

/// Raster contour map: contour cells carry their elevation, all other cells
/// are NODATA.
struct ContourMap {
    ElevationGrid grid;
    std::vector<double> levels; // ascending, distinct

    static ContourMap from_grid(ElevationGrid grid);

    GridDims dims() const { return grid.dims(); }
    BinaryRegion level_cells(double elevation) const;
    BinaryRegion contour_cells() const { return grid.valid_mask(); }
};

struct LevelLayer {
    double elevation = 0.0;
    BinaryRegion cells;
};

// One equality-thresholded layer per distinct elevation, ascending.
std::vector<LevelLayer> extract_levels(const ContourMap& map);

enum class ZoneKind {
    Band,     // between two distinct levels
    Flat,     // enclosed by several contours of one level
    Extremal, // peak or pit beyond a single level
};

/// A 4-connected run of non-contour cells and what bounds it.
struct Zone {
    ZoneKind kind = ZoneKind::Band;
    double level = 0.0;       // lower bounding level (Band) or the only level
    double upper_level = 0.0; // Band only
    int side = 0;             // Extremal: +1 above its level, -1 below
    double interval = 0.0;    // Extremal: spacing to the level across its contour
    bool touches_border = false;
    Cell seed;                // first cell in raster order
};

enum class Direction { IncreasingInward, DecreasingInward };

struct TerEntry {
    double elevation = 0.0;
    BinaryRegion region;
};

/// TERs ordered so that regions shrink: entries[k + 1] ⊆ entries[k].
struct TERStack {
    std::vector<TerEntry> entries;
    Direction direction = Direction::IncreasingInward;

    // +1 when elevation rises toward the inner (smaller) regions.
    int sign() const { return direction == Direction::IncreasingInward ? 1 : -1; }
};

struct ContourAnalysis {
    ContourMap map;
    Connectivity connectivity = Connectivity::Eight;
    LabelGrid zone_labels;
    std::vector<Zone> zones;
    TERStack stack;

    BinaryRegion zone_region(int zone) const;
    // Zones of one kind; for Extremal, optionally restricted to one side.
    BinaryRegion zones_where(ZoneKind kind, int side = 0) const;
};

ContourAnalysis analyze_contours(const ContourMap& map, Connectivity conn = Connectivity::Eight);

TERStack build_ters(const ContourMap& map, Connectivity conn = Connectivity::Eight);

enum class PairCategory { NestedOneToOne, NestedManyToOne, Mixed };

const char* to_string(PairCategory c);

struct PairPlan {
    BinaryRegion inner;
    BinaryRegion outer;
    double elev_inner = 0.0;
    double elev_outer = 0.0;
    ComponentSet inner_components;
    ComponentSet outer_components;
    struct Match {
        int inner = 0;
        int outer = 0;
    };
    std::vector<Match> matches;
    std::vector<int> orphans; // outer components containing no inner component
    PairCategory category = PairCategory::NestedOneToOne;

    BinaryRegion matched_outer() const;
};

PairPlan plan_pair(const TerEntry& inner, const TerEntry& outer, Connectivity conn = Connectivity::Eight);

} // namespace cmorph
