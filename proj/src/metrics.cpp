#include "cmorph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"

namespace cmorph {

namespace {

std::string num(double e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

const char* parity_name(Parity p) {
    return p == Parity::Even ? "even" : "odd";
}

std::vector<std::size_t> held_indices(std::size_t n, Parity parity) {
    std::vector<std::size_t> out;
    const std::size_t held_mod = parity == Parity::Even ? 1 : 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i % 2 == held_mod) {
            out.push_back(i);
        }
    }
    return out;
}

// Cells of the DEM at exactly e.
BinaryRegion iso_cells(const ElevationGrid& dem, double e) {
    BinaryRegion x(dem.dims());
    for (int r = 0; r < dem.rows(); ++r) {
        for (int c = 0; c < dem.cols(); ++c) {
            if (dem.at(r, c) == e) {
                x.set(r, c);
            }
        }
    }
    return x;
}

} // namespace

Parity parity_from_seed(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return (rng() & 1u) == 0 ? Parity::Even : Parity::Odd;
}

SkipResult skip_alternates(const ContourMap& map, Parity parity) {
    const std::size_t n = map.levels.size();
    if (n < 3) {
        throw InputError("skipping alternate contours needs at least 3 levels, found " + std::to_string(n));
    }
    std::vector<std::size_t> held = held_indices(n, parity);
    if (held.empty()) {
        parity = parity == Parity::Even ? Parity::Odd : Parity::Even;
        held = held_indices(n, parity);
    }
    SkipResult out;
    out.parity = parity;
    ElevationGrid g = map.grid;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = map.levels[i];
        if (std::find(held.begin(), held.end(), i) != held.end()) {
            out.held_out.push_back(e);
            map.level_cells(e).for_each_cell([&](int r, int c) { g.at(r, c) = ElevationGrid::nodata(); });
        } else {
            out.kept.push_back(e);
        }
    }
    out.test_map = ContourMap::from_grid(std::move(g));
    return out;
}

SkipResult skip_alternates(const ContourMap& map, std::uint64_t seed) {
    return skip_alternates(map, parity_from_seed(seed));
}

double rmse_on_contour(const ElevationGrid& dem, const BinaryRegion& truth_contour, double truth_elev) {
    require_same_dims(dem.dims(), truth_contour.dims(), "rmse_on_contour");
    if (truth_contour.empty()) {
        throw InputError("rmse_on_contour: truth contour is empty");
    }
    double sum = 0.0;
    truth_contour.for_each_cell([&](int r, int c) {
        const double d = dem.at(r, c) - truth_elev;
        sum += d * d;
    });
    return std::sqrt(sum / static_cast<double>(truth_contour.count()));
}

double mape_on_contour(const ElevationGrid& dem, const BinaryRegion& truth_contour, double truth_elev) {
    require_same_dims(dem.dims(), truth_contour.dims(), "mape_on_contour");
    if (truth_contour.empty()) {
        throw InputError("mape_on_contour: truth contour is empty");
    }
    if (truth_elev == 0.0) {
        throw InputError("mape_on_contour: percentage error is undefined at elevation 0");
    }
    double sum = 0.0;
    truth_contour.for_each_cell([&](int r, int c) { sum += std::abs(dem.at(r, c) - truth_elev); });
    return 100.0 * sum / static_cast<double>(truth_contour.count()) / std::abs(truth_elev);
}

int contour_hausdorff(const BinaryRegion& a, const BinaryRegion& b, const StructuringElement& se) {
    return hausdorff_dilation_distance(a, b, se);
}

double jaccard_index(const BinaryRegion& a, const BinaryRegion& b) {
    require_same_dims(a.dims(), b.dims(), "jaccard_index");
    const std::size_t uni = set_union(a, b).count();
    if (uni == 0) {
        throw InputError("jaccard_index: both sets are empty");
    }
    return static_cast<double>(set_intersect(a, b).count()) / static_cast<double>(uni);
}

Percentiles percentiles(std::vector<double> values) {
    if (values.empty()) {
        return {};
    }
    std::sort(values.begin(), values.end());
    // Nearest rank.
    const auto rank = [&](double p) {
        const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
        return values[std::clamp<std::size_t>(k, 1, values.size()) - 1];
    };
    return {values.front(), rank(0.5), rank(0.8), values.back()};
}

ValidationReport validate(const ContourMap& map, Parity parity, const InterpolationOptions& opts) {
    const SkipResult skip = skip_alternates(map, parity);
    const InterpolationResult run = interpolate(skip.test_map, opts);
    const TERStack truth_stack = build_ters(map, opts.connectivity);

    ValidationReport report;
    report.se = opts.se.name();
    report.parity = skip.parity;
    report.kept = skip.kept;
    report.held_out = skip.held_out;

    for (double e : skip.held_out) {
        const auto it = std::find(map.levels.begin(), map.levels.end(), e);
        const auto id = static_cast<std::size_t>(it - map.levels.begin());
        ValidationRow row;
        row.contour_id = static_cast<int>(id);
        row.elevation = e;
        row.elev_below = map.levels[id - 1];
        row.elev_above = map.levels[id + 1];

        const BinaryRegion truth = map.level_cells(e);
        row.rmse = rmse_on_contour(run.dem, truth, e);
        row.mape_percent = mape_on_contour(run.dem, truth, e);
        row.hd_actual = contour_hausdorff(map.level_cells(row.elev_below), truth, opts.se);

        const PairTrace* pair = nullptr;
        for (const PairTrace& p : run.pairs) {
            if (std::min(p.elev_outer, p.elev_inner) == row.elev_below &&
                std::max(p.elev_outer, p.elev_inner) == row.elev_above) {
                pair = &p;
            }
        }
        if (pair == nullptr) {
            throw ContractError("no interpolated pair brackets held-out level " + num(e));
        }
        BinaryRegion interpolated = pair->first_contour;
        if (interpolated.empty()) {
            interpolated = iso_cells(run.dem, 0.5 * (row.elev_below + row.elev_above));
        }
        if (interpolated.empty()) {
            throw InputError("no interpolated contour between " + num(row.elev_below) + " and " + num(row.elev_above));
        }
        row.hd_interpolated = contour_hausdorff(interpolated, truth, opts.se);

        BinaryRegion truth_ter(map.dims());
        for (const TerEntry& t : truth_stack.entries) {
            if (t.elevation == e) {
                truth_ter = t.region;
            }
        }
        row.jaccard = jaccard_index(pair->first_mer.empty() ? BinaryRegion(map.dims()) : pair->first_mer, truth_ter);
        report.rows.push_back(row);
    }

    std::vector<double> rmse, mape, jac, hdi, hda;
    for (const ValidationRow& r : report.rows) {
        rmse.push_back(r.rmse);
        mape.push_back(r.mape_percent);
        jac.push_back(r.jaccard);
        hdi.push_back(r.hd_interpolated);
        hda.push_back(r.hd_actual);
    }
    report.rmse = percentiles(rmse);
    report.mape_percent = percentiles(mape);
    report.jaccard = percentiles(jac);
    report.hd_interpolated = percentiles(hdi);
    report.hd_actual = percentiles(hda);
    return report;
}

ValidationReport validate(const ContourMap& map, std::uint64_t seed, const InterpolationOptions& opts) {
    ValidationReport r = validate(map, parity_from_seed(seed), opts);
    r.seed = seed;
    return r;
}

std::string report_to_json(const ValidationReport& report) {
    using nlohmann::json;
    const auto pct = [](const Percentiles& p) { return json{{"min", p.min}, {"p50", p.p50}, {"p80", p.p80}, {"max", p.max}}; };
    json j;
    j["structuring_element"] = report.se;
    j["parity"] = parity_name(report.parity);
    j["seed"] = report.seed ? json(*report.seed) : json(nullptr);
    j["kept_levels"] = report.kept;
    j["held_out_levels"] = report.held_out;
    j["rows"] = json::array();
    for (const ValidationRow& r : report.rows) {
        j["rows"].push_back({{"contour_id", r.contour_id},
                             {"elevation", r.elevation},
                             {"elevation_below", r.elev_below},
                             {"elevation_above", r.elev_above},
                             {"rmse", r.rmse},
                             {"mape_percent", r.mape_percent},
                             {"hd_interpolated", r.hd_interpolated},
                             {"hd_actual", r.hd_actual},
                             {"jaccard", r.jaccard}});
    }
    j["summary"] = {{"rmse", pct(report.rmse)},
                    {"mape_percent", pct(report.mape_percent)},
                    {"jaccard", pct(report.jaccard)},
                    {"hd_interpolated", pct(report.hd_interpolated)},
                    {"hd_actual", pct(report.hd_actual)}};
    return j.dump(2) + "\n";
}

std::string report_to_table(const ValidationReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %10s %8s %8s %12s %14s %8s\n", "contour", "elevation", "rmse", "mape%",
                  "HD(JC,C)", "HD(Ci,Ci+1)", "jaccard");
    out += line;
    for (const ValidationRow& r : report.rows) {
        std::snprintf(line, sizeof line, "%-8s %10.6g %8.3f %8.4f %12d %14d %8.4f\n",
                      ("C" + std::to_string(r.contour_id)).c_str(), r.elevation, r.rmse, r.mape_percent,
                      r.hd_interpolated, r.hd_actual, r.jaccard);
        out += line;
    }
    const auto sum = [&](const char* name, const Percentiles& p) {
        std::snprintf(line, sizeof line, "%-16s min %.4g  p50 %.4g  p80 %.4g  max %.4g\n", name, p.min, p.p50, p.p80,
                      p.max);
        out += line;
    };
    out += "\n";
    sum("rmse", report.rmse);
    sum("mape%", report.mape_percent);
    sum("jaccard", report.jaccard);
    sum("HD(JC,C)", report.hd_interpolated);
    sum("HD(Ci,Ci+1)", report.hd_actual);
    return out;
}

} // namespace cmorph
