#pragma once

#include <vector>

#include "cmorph/contour_model.hpp"
#include "cmorph/morphology.hpp"
#include "cmorph/raster.hpp"

namespace cmorph {

/// One queued median computation. `lower` is the larger region, `upper` the
/// smaller one nested inside it; elevations belong to those regions.
struct MedianTask {
    BinaryRegion lower;
    BinaryRegion upper;
    double elev_lo = 0.0;
    double elev_hi = 0.0;
    int depth = 1;
};

struct DemBuild {
    ElevationGrid dem;
    BinaryRegion assigned;

    explicit DemBuild(GridDims d) : dem(d), assigned(d) {}

    // Writes e into the cells of x not yet assigned; returns how many were new.
    std::size_t assign(const BinaryRegion& x, double e);
};

// Median of each lower component with the upper cells it contains, united.
BinaryRegion mer_case1(const MedianTask& task, const StructuringElement& se,
                       Connectivity conn = Connectivity::Eight);
// Region synthesized inside a component with no higher counterpart.
BinaryRegion mer_case2(const BinaryRegion& orphan, const StructuringElement& se,
                       Connectivity conn = Connectivity::Eight);
BinaryRegion intermediate_contour(const BinaryRegion& mer, const StructuringElement& se);

// Deepest task allowed for a window: ceil(log2(max(rows, cols))) + 2.
int depth_guard(GridDims d);

struct InterpolationOptions {
    StructuringElement se = StructuringElement::square3();
    Connectivity connectivity = Connectivity::Eight;
    int max_depth = 0; // 0: recurse until bands stop growing
};

struct PairTrace {
    double elev_outer = 0.0;
    double elev_inner = 0.0;
    PairCategory category = PairCategory::NestedOneToOne;
    int max_depth = 0;
    int tasks = 0;
    BinaryRegion first_mer;     // MER of the seed task
    BinaryRegion first_contour; // its gradient band within the pair's gap
    double first_elevation = 0.0;
};

struct SynthesisTrace {
    BinaryRegion region;      // orphan component or closed reverse zone
    BinaryRegion synthesized; // region assigned the stepped elevation
    double base_elevation = 0.0;
    double elevation = 0.0;
    int max_depth = 0;
};

struct InterpolationResult {
    ElevationGrid dem;
    Direction direction = Direction::IncreasingInward;
    std::vector<PairTrace> pairs;
    std::vector<SynthesisTrace> syntheses;
};

InterpolationResult run_algorithm1(const ContourAnalysis& analysis, const InterpolationOptions& opts = {});
InterpolationResult interpolate(const ContourMap& map, const InterpolationOptions& opts = {});

// Dense grid from a finished build; a NODATA cell is a ContractError.
ElevationGrid assemble_dem(const DemBuild& build);

} // namespace cmorph
