#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cmorph/synth.hpp"

using namespace cmorph;

TEST_CASE("synth: one square ring gives one level") {
    SynthSpec s;
    s.dims = GridDims(11, 11);
    s.shapes = {Shape{ShapeKind::Square, 5, 5, 3, 3, 100}};
    const ContourMap m = generate(s);
    REQUIRE(m.levels.size() == 1);
    CHECK(m.contour_cells().count() == 24);
    CHECK(m.contour_cells() == BinaryRegion::block(s.dims, 2, 2, 9, 9) - BinaryRegion::block(s.dims, 3, 3, 8, 8));
}

TEST_CASE("synth rings are single closed 8-connected curves filling to their shape") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const GridDims d(48, 48);
        Shape s;
        s.kind = static_cast<ShapeKind>(rng() % 3);
        s.center_row = 14 + 20 * u(rng);
        s.center_col = 14 + 20 * u(rng);
        s.radius_rows = 2 + 10 * u(rng);
        s.radius_cols = s.kind == ShapeKind::Ellipse ? 2 + 10 * u(rng) : s.radius_rows;
        const BinaryRegion ring = shape_ring(s, d);
        const BinaryRegion region = shape_region(s, d);
        CHECK(label_components(ring, Connectivity::Eight).size() == 1);
        CHECK(oracle::to_region(oracle::fill(oracle::from_region(ring))) == region);
    }
}

TEST_CASE("synth: concentric pair and generator rejections") {
    SynthSpec s;
    s.dims = GridDims(64, 64);
    s.shapes = {Shape{ShapeKind::Circle, 32, 32, 10, 10, 280}, Shape{ShapeKind::Circle, 32, 32, 25, 25, 260}};
    const ContourMap m = generate(s);
    CHECK(m.levels == std::vector<double>{260, 280});
    CHECK(m.level_cells(280) == shape_ring(s.shapes[0], s.dims));
    CHECK(m.level_cells(260) == shape_ring(s.shapes[1], s.dims));

    SynthSpec touching = s;
    touching.shapes[1].radius_rows = touching.shapes[1].radius_cols = 10;
    CHECK_THROWS_AS(generate(touching), InputError);

    SynthSpec partial = s;
    partial.shapes[1] = Shape{ShapeKind::Circle, 32, 45, 8, 8, 260};
    CHECK_THROWS_AS(generate(partial), InputError);

    SynthSpec zigzag = s;
    zigzag.shapes.push_back(Shape{ShapeKind::Circle, 32, 32, 4, 4, 270});
    CHECK_THROWS_AS(generate(zigzag), InputError);

    SynthSpec away = s;
    away.shapes.push_back(Shape{ShapeKind::Circle, 200, 200, 4, 4, 300});
    CHECK_THROWS_AS(generate(away), InputError);
}

TEST_CASE("synth: mid shape and JSON round trip") {
    const Shape a{ShapeKind::Circle, 32, 32, 10, 10, 280};
    const Shape b{ShapeKind::Circle, 32, 32, 25, 25, 260};
    const Shape m = mid_shape(a, b);
    CHECK(m.radius_rows == 17.5);
    CHECK(m.elevation == 270);
    CHECK_THROWS_AS(mid_shape(a, Shape{ShapeKind::Square, 0, 0, 1, 1, 0}), InputError);

    SynthSpec s;
    s.dims = GridDims(30, 40);
    s.interval = 10;
    s.shapes = {a, Shape{ShapeKind::Ellipse, 15, 20, 5, 9, 100}, Shape{ShapeKind::Square, 1, 2, 3, 3, 7}};
    const SynthSpec back = synth_spec_from_json(synth_spec_to_json(s));
    CHECK(back.dims == s.dims);
    CHECK(back.interval == 10);
    REQUIRE(back.shapes.size() == 3);
    CHECK(back.shapes[1].kind == ShapeKind::Ellipse);
    CHECK(back.shapes[1].radius_cols == 9);
    CHECK(back.shapes[2].kind == ShapeKind::Square);
    CHECK(back.shapes[2].center_col == 2);

    CHECK_THROWS_AS(synth_spec_from_json("{\"rows\": 3}"), InputError);
    CHECK_THROWS_AS(synth_spec_from_json("not json"), InputError);
    CHECK_THROWS_AS(
        synth_spec_from_json(R"({"rows":5,"cols":5,"shapes":[{"kind":"star","center":[2,2],"radius":1,"elevation":1}]})"),
        InputError);
}
