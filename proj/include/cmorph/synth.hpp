#pragma once

#include <string>
#include <vector>

#include "cmorph/contour_model.hpp"
#include "cmorph/raster.hpp"

namespace cmorph {

enum class ShapeKind { Circle, Square, Ellipse };

/// Closed synthetic contour. Sizes are radii in cells: circle and square use
/// `radius_rows` for both axes; squares are Chebyshev balls.
struct Shape {
    ShapeKind kind = ShapeKind::Circle;
    double center_row = 0.0;
    double center_col = 0.0;
    double radius_rows = 0.0;
    double radius_cols = 0.0;
    double elevation = 0.0;
};

struct SynthSpec {
    GridDims dims;
    std::vector<Shape> shapes;
    double interval = 20.0;
};

// Filled digital region of the shape, clipped to the window.
BinaryRegion shape_region(const Shape& s, GridDims dims);
// Inner 4-boundary of the region: an 8-connected closed curve whose fill is
// exactly shape_region. Cells on the window edge close it only implicitly.
BinaryRegion shape_ring(const Shape& s, GridDims dims);

// Shape halfway between two shapes of the same kind (averaged centre and radii).
Shape mid_shape(const Shape& a, const Shape& b);

ContourMap generate(const SynthSpec& spec);

// {"rows":64,"cols":64,"interval":20,"shapes":[{"kind":"circle","center":[32,32],
//  "radius":10,"elevation":280}, {"kind":"ellipse","center":[r,c],"radius":[a,b],...}]}
SynthSpec synth_spec_from_json(const std::string& text);
std::string synth_spec_to_json(const SynthSpec& spec);

} // namespace cmorph
