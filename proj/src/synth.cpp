#include "cmorph/synth.hpp"

#include <algorithm>
#include <cmath>

#include "cmorph/morphology.hpp"
#include "json.hpp"

namespace cmorph {

using nlohmann::json;

BinaryRegion shape_region(const Shape& s, GridDims dims) {
    if (!(s.radius_rows >= 0.0) || !(s.radius_cols >= 0.0)) {
        throw InputError("shape radius must be nonnegative");
    }
    BinaryRegion x(dims);
    for (int r = 0; r < dims.rows; ++r) {
        for (int c = 0; c < dims.cols; ++c) {
            const double dr = r - s.center_row;
            const double dc = c - s.center_col;
            bool inside = false;
            switch (s.kind) {
            case ShapeKind::Circle:
                inside = dr * dr + dc * dc <= s.radius_rows * s.radius_rows;
                break;
            case ShapeKind::Square:
                inside = std::max(std::abs(dr), std::abs(dc)) <= s.radius_rows;
                break;
            case ShapeKind::Ellipse: {
                const double a = std::max(s.radius_rows, 1e-9);
                const double b = std::max(s.radius_cols, 1e-9);
                inside = (dr / a) * (dr / a) + (dc / b) * (dc / b) <= 1.0;
                break;
            }
            }
            if (inside) {
                x.set(r, c);
            }
        }
    }
    return x;
}

BinaryRegion shape_ring(const Shape& s, GridDims dims) {
    const BinaryRegion region = shape_region(s, dims);
    return set_difference(region, erode(region, StructuringElement::cross3(), 1));
}

Shape mid_shape(const Shape& a, const Shape& b) {
    if (a.kind != b.kind) {
        throw InputError("mid_shape: shapes must be of the same kind");
    }
    Shape m = a;
    m.center_row = 0.5 * (a.center_row + b.center_row);
    m.center_col = 0.5 * (a.center_col + b.center_col);
    m.radius_rows = 0.5 * (a.radius_rows + b.radius_rows);
    m.radius_cols = 0.5 * (a.radius_cols + b.radius_cols);
    m.elevation = 0.5 * (a.elevation + b.elevation);
    return m;
}

ContourMap generate(const SynthSpec& spec) {
    const GridDims d = spec.dims;
    std::vector<BinaryRegion> regions;
    std::vector<BinaryRegion> rings;
    for (const Shape& s : spec.shapes) {
        if (!std::isfinite(s.elevation)) {
            throw InputError("shape elevation must be finite");
        }
        regions.push_back(shape_region(s, d));
        rings.push_back(shape_ring(s, d));
        const std::string at = "shape at (" + std::to_string(s.center_row) + "," + std::to_string(s.center_col) + ")";
        if (rings.back().empty()) {
            throw InputError(at + " does not intersect the window");
        }
        if (rings.back() == regions.back()) {
            throw InputError(at + " is too small to enclose any cell");
        }
    }

    const std::size_t n = spec.shapes.size();
    // parent[i]: smallest region strictly containing shape i.
    std::vector<int> parent(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (intersects(rings[i], rings[j])) {
                throw InputError("synthetic contours " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
            }
            const bool i_in_j = is_subset(regions[i], regions[j]);
            const bool j_in_i = is_subset(regions[j], regions[i]);
            if (!i_in_j && !j_in_i && intersects(regions[i], regions[j])) {
                throw InputError("synthetic contours " + std::to_string(i) + " and " + std::to_string(j) +
                                 " overlap without nesting");
            }
            if (i_in_j && !j_in_i) {
                const int p = parent[i];
                if (p < 0 || regions[j].count() < regions[static_cast<std::size_t>(p)].count()) {
                    parent[i] = static_cast<int>(j);
                }
            }
        }
    }
    // Elevations along each nesting chain must move one way.
    for (std::size_t i = 0; i < n; ++i) {
        int dir = 0;
        for (int c = static_cast<int>(i); parent[static_cast<std::size_t>(c)] >= 0; c = parent[static_cast<std::size_t>(c)]) {
            const double diff = spec.shapes[static_cast<std::size_t>(c)].elevation -
                                spec.shapes[static_cast<std::size_t>(parent[static_cast<std::size_t>(c)])].elevation;
            const int step = diff > 0 ? 1 : diff < 0 ? -1 : 0;
            if (step != 0 && dir != 0 && step != dir) {
                throw InputError("synthetic contour " + std::to_string(i) + ": elevations are not monotone along its nesting chain");
            }
            if (step != 0) dir = step;
        }
    }

    ElevationGrid g(d);
    for (std::size_t i = 0; i < n; ++i) {
        rings[i].for_each_cell([&](int r, int c) { g.at(r, c) = spec.shapes[i].elevation; });
    }
    return ContourMap::from_grid(std::move(g));
}

namespace {

ShapeKind kind_from(const std::string& s) {
    if (s == "circle") return ShapeKind::Circle;
    if (s == "square") return ShapeKind::Square;
    if (s == "ellipse") return ShapeKind::Ellipse;
    throw InputError("unknown shape kind '" + s + "' (expected circle, square or ellipse)");
}

const char* kind_name(ShapeKind k) {
    switch (k) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Square: return "square";
    case ShapeKind::Ellipse: return "ellipse";
    }
    return "?";
}

} // namespace

SynthSpec synth_spec_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        SynthSpec spec;
        spec.dims = GridDims(j.at("rows").get<int>(), j.at("cols").get<int>());
        spec.interval = j.value("interval", 20.0);
        for (const json& js : j.at("shapes")) {
            Shape s;
            s.kind = kind_from(js.at("kind").get<std::string>());
            const auto& ctr = js.at("center");
            s.center_row = ctr.at(0).get<double>();
            s.center_col = ctr.at(1).get<double>();
            const auto& rad = js.at("radius");
            if (rad.is_array()) {
                s.radius_rows = rad.at(0).get<double>();
                s.radius_cols = rad.at(1).get<double>();
            } else {
                s.radius_rows = s.radius_cols = rad.get<double>();
            }
            s.elevation = js.at("elevation").get<double>();
            spec.shapes.push_back(s);
        }
        return spec;
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid synth spec: ") + e.what());
    }
}

std::string synth_spec_to_json(const SynthSpec& spec) {
    json j;
    j["rows"] = spec.dims.rows;
    j["cols"] = spec.dims.cols;
    j["interval"] = spec.interval;
    j["shapes"] = json::array();
    for (const Shape& s : spec.shapes) {
        json js;
        js["kind"] = kind_name(s.kind);
        js["center"] = {s.center_row, s.center_col};
        if (s.kind == ShapeKind::Ellipse) {
            js["radius"] = {s.radius_rows, s.radius_cols};
        } else {
            js["radius"] = s.radius_rows;
        }
        js["elevation"] = s.elevation;
        j["shapes"].push_back(js);
    }
    return j.dump(2);
}

} // namespace cmorph
