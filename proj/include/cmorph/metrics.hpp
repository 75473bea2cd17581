#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmorph/contour_model.hpp"
#include "cmorph/interpolator.hpp"
#include "cmorph/morphology.hpp"

namespace cmorph {

enum class Parity { Even, Odd };

struct SkipResult {
    ContourMap test_map;
    std::vector<double> kept;
    std::vector<double> held_out;
    Parity parity = Parity::Even; // the parity actually applied
};

// Even keeps the even-indexed levels (interior odd ones are held out), odd keeps
// the odd-indexed ones plus both end levels. End levels are always kept so
// every held-out level stays bracketed; if the requested parity would hold
// nothing out, the other one is used.
SkipResult skip_alternates(const ContourMap& map, Parity parity);
SkipResult skip_alternates(const ContourMap& map, std::uint64_t seed);
Parity parity_from_seed(std::uint64_t seed);

double rmse_on_contour(const ElevationGrid& dem, const BinaryRegion& truth_contour, double truth_elev);
double mape_on_contour(const ElevationGrid& dem, const BinaryRegion& truth_contour, double truth_elev);
int contour_hausdorff(const BinaryRegion& a, const BinaryRegion& b, const StructuringElement& se);
double jaccard_index(const BinaryRegion& a, const BinaryRegion& b);

struct ValidationRow {
    int contour_id = 0; // index of the level in the original map
    double elevation = 0.0;
    double elev_below = 0.0; // kept neighbours bracketing it
    double elev_above = 0.0;
    double rmse = 0.0;
    double mape_percent = 0.0;
    int hd_interpolated = 0; // HD(interpolated contour, truth)
    int hd_actual = 0;       // HD(kept contour below, truth)
    double jaccard = 0.0;
};

struct Percentiles {
    double min = 0.0;
    double p50 = 0.0;
    double p80 = 0.0;
    double max = 0.0;
};

struct ValidationReport {
    std::string se;
    Parity parity = Parity::Even;
    std::optional<std::uint64_t> seed;
    std::vector<double> kept;
    std::vector<double> held_out;
    std::vector<ValidationRow> rows;
    Percentiles rmse, mape_percent, jaccard, hd_interpolated, hd_actual;
};

Percentiles percentiles(std::vector<double> values);

ValidationReport validate(const ContourMap& map, Parity parity, const InterpolationOptions& opts = {});
ValidationReport validate(const ContourMap& map, std::uint64_t seed, const InterpolationOptions& opts = {});

std::string report_to_json(const ValidationReport& report);
std::string report_to_table(const ValidationReport& report);

} // namespace cmorph
