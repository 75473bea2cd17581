#include "cmorph/interpolator.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace cmorph {

namespace {

std::string num(double e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

// Window sides reached by x. Contours are taken to continue past those sides;
// elsewhere the window edge closes the outer region.
BinaryRegion open_sides(const BinaryRegion& x) {
    const GridDims d = x.dims();
    BinaryRegion out(d);
    bool top = false, bottom = false, left = false, right = false;
    for (int c = 0; c < d.cols; ++c) {
        top = top || x.test(0, c);
        bottom = bottom || x.test(d.rows - 1, c);
    }
    for (int r = 0; r < d.rows; ++r) {
        left = left || x.test(r, 0);
        right = right || x.test(r, d.cols - 1);
    }
    if (top) out |= BinaryRegion::block(d, 0, 0, 1, d.cols);
    if (bottom) out |= BinaryRegion::block(d, d.rows - 1, 0, d.rows, d.cols);
    if (left) out |= BinaryRegion::block(d, 0, 0, d.rows, 1);
    if (right) out |= BinaryRegion::block(d, 0, d.cols - 1, d.rows, d.cols);
    return out;
}

struct QueueStats {
    int max_depth = 0;
    int tasks = 0;
};

// Drains one lineage of tasks. `allowed` masks the cells the lineage may write.
// Returns the seed task's MER.
BinaryRegion run_lineage(DemBuild& build, MedianTask seed, const BinaryRegion& allowed, const StructuringElement& se,
                         Connectivity conn, int guard, int max_depth, QueueStats& stats, BinaryRegion* first_contour) {
    std::deque<MedianTask> queue;
    std::vector<MedianTask> leaves;
    BinaryRegion first_mer(seed.lower.dims());
    queue.push_back(std::move(seed));
    while (!queue.empty()) {
        MedianTask t = std::move(queue.front());
        queue.pop_front();
        if (t.depth > guard) {
            throw ContractError("median recursion exceeded depth " + std::to_string(guard) + " between elevations " +
                                num(t.elev_lo) + " and " + num(t.elev_hi) + " (" + std::to_string(t.lower.count()) +
                                " and " + std::to_string(t.upper.count()) + " cells)");
        }
        stats.max_depth = std::max(stats.max_depth, t.depth);
        ++stats.tasks;

        const BinaryRegion m = mer_case1(t, se, conn);
        if (!is_subset(t.upper, m) || !is_subset(m, t.lower)) {
            throw ContractError("median region escaped its parents between elevations " + num(t.elev_lo) + " and " +
                                num(t.elev_hi));
        }
        const BinaryRegion gap = t.lower - t.upper;
        const BinaryRegion contour = intermediate_contour(m, se) & gap;
        const double mid = 0.5 * (t.elev_lo + t.elev_hi);
        const std::size_t written = build.assign(contour & allowed, mid);
        if (stats.tasks == 1) {
            first_mer = m;
            if (first_contour != nullptr) {
                *first_contour = contour;
            }
        }
        // Thin corridors advance only half their width per level; past the guard
        // the remaining steps are below interval / 2^guard and are back-filled.
        const int limit = max_depth == 0 ? guard : std::min(max_depth, guard);
        if (written > 0 && m != t.lower && m != t.upper && t.depth < limit) {
            queue.push_back({t.lower, m, t.elev_lo, mid, t.depth + 1});
            queue.push_back({m, t.upper, mid, t.elev_hi, t.depth + 1});
        } else {
            leaves.push_back(std::move(t));
        }
    }
    // Leaf gaps partition the seed gap; close whatever the bands missed.
    for (const MedianTask& t : leaves) {
        build.assign((t.lower - t.upper) & allowed, 0.5 * (t.elev_lo + t.elev_hi));
    }
    return first_mer;
}

} // namespace

std::size_t DemBuild::assign(const BinaryRegion& x, double e) {
    const BinaryRegion fresh = x - assigned;
    fresh.for_each_cell([&](int r, int c) { dem.at(r, c) = e; });
    assigned |= fresh;
    return fresh.count();
}

BinaryRegion mer_case1(const MedianTask& task, const StructuringElement& se, Connectivity conn) {
    require_same_dims(task.lower.dims(), task.upper.dims(), "mer_case1");
    if (!is_subset(task.upper, task.lower)) {
        throw ContractError("mer_case1: upper region is not inside lower region");
    }
    BinaryRegion out(task.lower.dims());
    for (const BinaryRegion& comp : label_components(task.lower, conn).components) {
        const BinaryRegion inner = task.upper & comp;
        if (!inner.empty()) {
            out |= median_set(inner, comp, se, open_sides(inner)).median;
        }
    }
    return out;
}

BinaryRegion mer_case2(const BinaryRegion& orphan, const StructuringElement& se, Connectivity conn) {
    if (orphan.empty()) {
        throw ContractError("mer_case2: empty orphan region");
    }
    return median_set(ultimate_erosion(orphan, se, conn).region, orphan, se).median;
}

BinaryRegion intermediate_contour(const BinaryRegion& mer, const StructuringElement& se) {
    return morphological_gradient(mer, se);
}

int depth_guard(GridDims d) {
    const int n = std::max(d.rows, d.cols);
    int k = 0;
    while ((1 << k) < n) {
        ++k;
    }
    return k + 2;
}

InterpolationResult run_algorithm1(const ContourAnalysis& analysis, const InterpolationOptions& opts) {
    const ContourMap& map = analysis.map;
    const TERStack& stack = analysis.stack;
    if (map.levels.size() < 2) {
        throw InputError("interpolation needs at least 2 distinct contour elevations, found " +
                         std::to_string(map.levels.size()));
    }
    const GridDims d = map.dims();
    const StructuringElement& se = opts.se;
    const Connectivity conn = analysis.connectivity;
    const int sign = stack.sign();
    const int guard = depth_guard(d);

    DemBuild build(d);
    const BinaryRegion contour = map.contour_cells();
    contour.for_each_cell([&](int r, int c) { build.dem.at(r, c) = map.grid.at(r, c); });
    build.assigned = contour;

    const BinaryRegion flat = analysis.zones_where(ZoneKind::Flat);
    const BinaryRegion reserved = flat | analysis.zones_where(ZoneKind::Extremal, -sign);
    const BinaryRegion allowed = complement(reserved);

    InterpolationResult result;
    result.direction = stack.direction;

    // Closed zones running against the chain are holes in the TERs around them;
    // the pair medians see them filled, and never write into them.
    std::vector<BinaryRegion> reverse_zones;
    for (std::size_t z = 0; z < analysis.zones.size(); ++z) {
        const Zone& zone = analysis.zones[z];
        if (zone.kind == ZoneKind::Extremal && zone.side == -sign && !zone.touches_border) {
            reverse_zones.push_back(analysis.zone_region(static_cast<int>(z)));
        }
    }
    const auto plugged = [&](const TerEntry& e) {
        TerEntry out = e;
        for (const BinaryRegion& hole : reverse_zones) {
            if (is_subset(dilate(hole, StructuringElement::square3(), 1) - hole, e.region)) {
                out.region |= hole;
            }
        }
        return out;
    };

    std::vector<std::pair<BinaryRegion, double>> orphans; // region, interval
    const std::size_t n = stack.entries.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const TerEntry outer = plugged(stack.entries[k]);
        const TerEntry inner = plugged(stack.entries[k + 1]);
        const PairPlan plan = plan_pair(inner, outer, conn);
        const double interval = std::abs(inner.elevation - outer.elevation);
        for (int o : plan.orphans) {
            orphans.emplace_back(plan.outer_components.components[static_cast<std::size_t>(o)], interval);
        }
        PairTrace trace;
        trace.elev_outer = outer.elevation;
        trace.elev_inner = inner.elevation;
        trace.category = plan.category;
        trace.first_contour = BinaryRegion(d);
        QueueStats stats;
        const BinaryRegion seed_outer = plan.matched_outer();
        if (!seed_outer.empty()) {
            trace.first_mer = run_lineage(build, {seed_outer, inner.region, outer.elevation, inner.elevation, 1}, allowed,
                                          se, conn, guard, opts.max_depth, stats, &trace.first_contour);
            trace.first_elevation = 0.5 * (outer.elevation + inner.elevation);
        }
        trace.max_depth = stats.max_depth;
        trace.tasks = stats.tasks;
        result.pairs.push_back(std::move(trace));
    }
    const double last_interval = std::abs(stack.entries[n - 1].elevation - stack.entries[n - 2].elevation);
    for (const BinaryRegion& comp : label_components(stack.entries[n - 1].region, conn).components) {
        orphans.emplace_back(comp, last_interval);
    }

    const auto synthesize = [&](const BinaryRegion& region, double base, double target, const BinaryRegion& mask) {
        SynthesisTrace s;
        s.region = region;
        s.base_elevation = base;
        s.elevation = target;
        s.synthesized = mer_case2(region, se, conn);
        build.assign(s.synthesized & mask, target);
        if (s.synthesized != region) {
            QueueStats stats;
            run_lineage(build, {region, s.synthesized, base, target, 1}, mask, se, conn, guard, opts.max_depth, stats, nullptr);
            s.max_depth = stats.max_depth;
        }
        result.syntheses.push_back(std::move(s));
    };

    // Peaks (or pits, for a basin) beyond the innermost contour of each chain.
    for (const auto& [region, interval] : orphans) {
        if (region.touches_border() || intersects(region, flat)) {
            continue;
        }
        const Cell seed = *(region & contour).first_cell();
        const double base = map.grid.at(seed.row, seed.col);
        synthesize(region, base, base + sign * interval, allowed);
    }

    // Closed extremal zones running against the chain direction.
    for (std::size_t z = 0; z < analysis.zones.size(); ++z) {
        const Zone& zone = analysis.zones[z];
        if (zone.kind != ZoneKind::Extremal || zone.side != -sign || zone.touches_border) {
            continue;
        }
        const BinaryRegion cells = analysis.zone_region(static_cast<int>(z));
        const BinaryRegion region = cells | (dilate(cells, StructuringElement::square3(), 1) & contour);
        synthesize(region, zone.level, zone.level - sign * zone.interval, cells);
    }

    // Whatever is left is flat at its zone's level.
    for (int r = 0; r < d.rows; ++r) {
        for (int c = 0; c < d.cols; ++c) {
            if (build.assigned.test(r, c)) {
                continue;
            }
            const int z = analysis.zone_labels.at(r, c);
            if (z < 0) {
                continue;
            }
            const Zone& zone = analysis.zones[static_cast<std::size_t>(z)];
            build.dem.at(r, c) = zone.kind == ZoneKind::Band ? 0.5 * (zone.level + zone.upper_level) : zone.level;
            build.assigned.set(r, c);
        }
    }
    result.dem = assemble_dem(build);
    return result;
}

InterpolationResult interpolate(const ContourMap& map, const InterpolationOptions& opts) {
    return run_algorithm1(analyze_contours(map, opts.connectivity), opts);
}

ElevationGrid assemble_dem(const DemBuild& build) {
    const ElevationGrid& g = build.dem;
    for (int r = 0; r < g.rows(); ++r) {
        for (int c = 0; c < g.cols(); ++c) {
            if (g.is_nodata(r, c)) {
                throw ContractError("DEM cell (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") was never assigned an elevation");
            }
        }
    }
    return g;
}

} // namespace cmorph
