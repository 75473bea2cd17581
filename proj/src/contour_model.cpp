#include "cmorph/contour_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace cmorph {

namespace {

std::string where(Cell p) {
    return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

std::string fmt_elev(double e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

Connectivity dual(Connectivity c) {
    return c == Connectivity::Eight ? Connectivity::Four : Connectivity::Eight;
}

int neighbour_count(Connectivity c) {
    return c == Connectivity::Four ? 4 : 8;
}

constexpr int kDr[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
constexpr int kDc[8] = {0, 0, -1, 1, -1, 1, -1, 1};

struct ContourComponents {
    std::vector<std::int32_t> label; // per cell, -1 off-contour
    std::vector<double> level;
    std::vector<Cell> seed;
    std::vector<std::size_t> size;
};

// Components of equal-elevation contour cells.
ContourComponents contour_components(const ElevationGrid& g, Connectivity conn) {
    const GridDims d = g.dims();
    ContourComponents out;
    out.label.assign(d.cells(), -1);
    const int nbrs = neighbour_count(conn);
    std::vector<Cell> stack;
    for (int r0 = 0; r0 < d.rows; ++r0) {
        for (int c0 = 0; c0 < d.cols; ++c0) {
            const std::size_t i0 = static_cast<std::size_t>(r0) * d.cols + c0;
            if (g.is_nodata(r0, c0) || out.label[i0] >= 0) {
                continue;
            }
            const auto id = static_cast<std::int32_t>(out.level.size());
            const double e = g.at(r0, c0);
            out.level.push_back(e);
            out.seed.push_back({r0, c0});
            out.size.push_back(0);
            out.label[i0] = id;
            stack.push_back({r0, c0});
            while (!stack.empty()) {
                const Cell p = stack.back();
                stack.pop_back();
                ++out.size[static_cast<std::size_t>(id)];
                for (int k = 0; k < nbrs; ++k) {
                    const int r = p.row + kDr[k];
                    const int c = p.col + kDc[k];
                    if (!d.contains(r, c) || g.is_nodata(r, c) || g.at(r, c) != e) {
                        continue;
                    }
                    const std::size_t i = static_cast<std::size_t>(r) * d.cols + c;
                    if (out.label[i] < 0) {
                        out.label[i] = id;
                        stack.push_back({r, c});
                    }
                }
            }
        }
    }
    return out;
}

// True when the component encloses at least one cell besides its own.
bool encloses_something(const ContourComponents& cc, std::int32_t id, GridDims d, Connectivity zone_conn) {
    BinaryRegion outside(d);
    std::vector<Cell> stack;
    const auto visit = [&](int r, int c) {
        if (cc.label[static_cast<std::size_t>(r) * d.cols + c] == id || outside.test(r, c)) {
            return;
        }
        outside.set(r, c);
        stack.push_back({r, c});
    };
    for (int c = 0; c < d.cols; ++c) {
        visit(0, c);
        visit(d.rows - 1, c);
    }
    for (int r = 0; r < d.rows; ++r) {
        visit(r, 0);
        visit(r, d.cols - 1);
    }
    const int nbrs = neighbour_count(zone_conn);
    while (!stack.empty()) {
        const Cell p = stack.back();
        stack.pop_back();
        for (int k = 0; k < nbrs; ++k) {
            const int r = p.row + kDr[k];
            const int c = p.col + kDc[k];
            if (d.contains(r, c)) {
                visit(r, c);
            }
        }
    }
    return outside.count() + cc.size[static_cast<std::size_t>(id)] < d.cells();
}

bool in_threshold_set(const Zone& z, double e, Direction dir) {
    if (dir == Direction::IncreasingInward) {
        switch (z.kind) {
        case ZoneKind::Band: return z.level >= e;
        case ZoneKind::Flat: return z.level >= e;
        case ZoneKind::Extremal: return z.side > 0 ? z.level >= e : z.level > e;
        }
    } else {
        switch (z.kind) {
        case ZoneKind::Band: return z.upper_level <= e;
        case ZoneKind::Flat: return z.level <= e;
        case ZoneKind::Extremal: return z.side < 0 ? z.level <= e : z.level < e;
        }
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------------------

ContourMap ContourMap::from_grid(ElevationGrid grid) {
    std::set<double> distinct;
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            if (grid.is_nodata(r, c)) {
                continue;
            }
            const double v = grid.at(r, c);
            if (!std::isfinite(v)) {
                throw InputError("contour map cell " + where({r, c}) + " holds a non-finite elevation");
            }
            distinct.insert(v);
        }
    }
    ContourMap m{std::move(grid), {}};
    m.levels.assign(distinct.begin(), distinct.end());
    return m;
}

BinaryRegion ContourMap::level_cells(double elevation) const {
    BinaryRegion x(dims());
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            if (!grid.is_nodata(r, c) && grid.at(r, c) == elevation) {
                x.set(r, c);
            }
        }
    }
    return x;
}

std::vector<LevelLayer> extract_levels(const ContourMap& map) {
    if (map.levels.empty()) {
        throw InputError("contour map contains no contour cells");
    }
    std::vector<LevelLayer> layers;
    layers.reserve(map.levels.size());
    for (double e : map.levels) {
        layers.push_back({e, map.level_cells(e)});
    }
    return layers;
}

BinaryRegion ContourAnalysis::zone_region(int zone) const {
    BinaryRegion x(map.dims());
    for (int r = 0; r < x.rows(); ++r) {
        for (int c = 0; c < x.cols(); ++c) {
            if (zone_labels.at(r, c) == zone) {
                x.set(r, c);
            }
        }
    }
    return x;
}

BinaryRegion ContourAnalysis::zones_where(ZoneKind kind, int side) const {
    BinaryRegion x(map.dims());
    for (int r = 0; r < x.rows(); ++r) {
        for (int c = 0; c < x.cols(); ++c) {
            const int z = zone_labels.at(r, c);
            if (z < 0) {
                continue;
            }
            const Zone& zone = zones[static_cast<std::size_t>(z)];
            if (zone.kind == kind && (side == 0 || zone.side == side)) {
                x.set(r, c);
            }
        }
    }
    return x;
}

ContourAnalysis analyze_contours(const ContourMap& map, Connectivity conn) {
    if (map.levels.empty()) {
        throw InputError("contour map contains no contour cells");
    }
    const GridDims d = map.dims();
    const Connectivity zone_conn = dual(conn);
    const BinaryRegion contour = map.contour_cells();

    ContourAnalysis out;
    out.map = map;
    out.connectivity = conn;
    out.zone_labels = label_map(complement(contour), zone_conn);
    const ContourComponents cc = contour_components(map.grid, conn);

    const auto nz = static_cast<std::size_t>(out.zone_labels.count);
    const std::size_t nc = cc.level.size();
    std::vector<std::vector<std::int32_t>> zone_comps(nz);
    std::vector<std::vector<std::int32_t>> comp_zones(nc);
    out.zones.assign(nz, Zone{});
    std::vector<bool> seeded(nz, false);

    const int nbrs = neighbour_count(zone_conn);
    for (int r = 0; r < d.rows; ++r) {
        for (int c = 0; c < d.cols; ++c) {
            const std::int32_t z = out.zone_labels.at(r, c);
            if (z < 0) {
                continue;
            }
            Zone& zone = out.zones[static_cast<std::size_t>(z)];
            if (!seeded[static_cast<std::size_t>(z)]) {
                zone.seed = {r, c};
                seeded[static_cast<std::size_t>(z)] = true;
            }
            if (r == 0 || c == 0 || r == d.rows - 1 || c == d.cols - 1) {
                zone.touches_border = true;
            }
            for (int k = 0; k < nbrs; ++k) {
                const int rr = r + kDr[k];
                const int cc2 = c + kDc[k];
                if (!d.contains(rr, cc2)) {
                    continue;
                }
                const std::int32_t comp = cc.label[static_cast<std::size_t>(rr) * d.cols + cc2];
                if (comp >= 0) {
                    zone_comps[static_cast<std::size_t>(z)].push_back(comp);
                    comp_zones[static_cast<std::size_t>(comp)].push_back(z);
                }
            }
        }
    }
    for (auto* lists : {&zone_comps, &comp_zones}) {
        for (auto& v : *lists) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }

    // Open contours: a component that separates nothing.
    for (std::size_t k = 0; k < nc; ++k) {
        if (comp_zones[k].size() == 1 && cc.size[k] > 4 &&
            !encloses_something(cc, static_cast<std::int32_t>(k), d, zone_conn)) {
            throw InputError("contour at elevation " + fmt_elev(cc.level[k]) + " starting at " + where(cc.seed[k]) +
                             " is open inside the window; contours must close or reach the window border");
        }
    }

    double min_spacing = 0.0;
    for (std::size_t i = 1; i < map.levels.size(); ++i) {
        const double gap = map.levels[i] - map.levels[i - 1];
        min_spacing = i == 1 ? gap : std::min(min_spacing, gap);
    }

    // Pass 1: bands and flats.
    std::vector<bool> needs_side(nz, false);
    for (std::size_t z = 0; z < nz; ++z) {
        Zone& zone = out.zones[z];
        std::vector<double> lv;
        for (std::int32_t comp : zone_comps[z]) {
            lv.push_back(cc.level[static_cast<std::size_t>(comp)]);
        }
        std::sort(lv.begin(), lv.end());
        lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
        if (lv.empty()) {
            throw InputError("region at " + where(zone.seed) + " is not bounded by any contour");
        }
        if (lv.size() > 2) {
            throw InputError("region at " + where(zone.seed) + " is bounded by contours at " + std::to_string(lv.size()) +
                             " different elevations; contours of different elevation must not cross");
        }
        if (lv.size() == 2) {
            zone.kind = ZoneKind::Band;
            zone.level = lv[0];
            zone.upper_level = lv[1];
        } else if (zone_comps[z].size() >= 2 && !zone.touches_border) {
            zone.kind = ZoneKind::Flat;
            zone.level = lv[0];
        } else {
            zone.kind = ZoneKind::Extremal;
            zone.level = lv[0];
            needs_side[z] = true;
        }
    }

    // Pass 2: which side of its contour an extremal zone lies on, voted from the
    // band zones across each bounding contour.
    for (std::size_t z = 0; z < nz; ++z) {
        if (!needs_side[z]) {
            continue;
        }
        Zone& zone = out.zones[z];
        int above = 0;
        int below = 0;
        double interval = std::numeric_limits<double>::infinity();
        for (std::int32_t comp : zone_comps[z]) {
            for (std::int32_t other : comp_zones[static_cast<std::size_t>(comp)]) {
                const Zone& oz = out.zones[static_cast<std::size_t>(other)];
                if (static_cast<std::size_t>(other) == z || oz.kind != ZoneKind::Band) {
                    continue;
                }
                const double across = oz.level == zone.level ? oz.upper_level : oz.level;
                if (across < zone.level) {
                    ++above;
                } else {
                    ++below;
                }
                interval = std::min(interval, std::abs(across - zone.level));
            }
        }
        if (above > 0 && below > 0) {
            zone.kind = ZoneKind::Flat;
            continue;
        }
        if (above == 0 && below == 0) {
            zone.side = zone.touches_border ? -1 : 1;
            zone.interval = min_spacing;
        } else {
            zone.side = above > 0 ? 1 : -1;
            zone.interval = interval;
        }
    }

    // A map whose closed extremal zones are all pits is a basin: TERs shrink
    // toward lower elevations.
    bool any_closed = false;
    bool all_pits = true;
    for (const Zone& zone : out.zones) {
        if (zone.kind == ZoneKind::Extremal && !zone.touches_border) {
            any_closed = true;
            all_pits = all_pits && zone.side < 0;
        }
    }
    out.stack.direction = any_closed && all_pits ? Direction::DecreasingInward : Direction::IncreasingInward;

    std::vector<double> order = map.levels;
    if (out.stack.direction == Direction::DecreasingInward) {
        std::reverse(order.begin(), order.end());
    }
    for (double e : order) {
        BinaryRegion ter(d);
        for (int r = 0; r < d.rows; ++r) {
            for (int c = 0; c < d.cols; ++c) {
                bool member;
                if (!map.grid.is_nodata(r, c)) {
                    const double v = map.grid.at(r, c);
                    member = out.stack.direction == Direction::IncreasingInward ? v >= e : v <= e;
                } else {
                    member = in_threshold_set(out.zones[static_cast<std::size_t>(out.zone_labels.at(r, c))], e,
                                              out.stack.direction);
                }
                if (member) {
                    ter.set(r, c);
                }
            }
        }
        if (!out.stack.entries.empty() && !is_subset(ter, out.stack.entries.back().region)) {
            throw ContractError("threshold elevation regions are not nested at elevation " + fmt_elev(e));
        }
        out.stack.entries.push_back({e, std::move(ter)});
    }
    return out;
}

TERStack build_ters(const ContourMap& map, Connectivity conn) {
    return analyze_contours(map, conn).stack;
}

// ---------------------------------------------------------------------------

const char* to_string(PairCategory c) {
    switch (c) {
    case PairCategory::NestedOneToOne: return "1a";
    case PairCategory::NestedManyToOne: return "1b";
    case PairCategory::Mixed: return "2-mixed";
    }
    return "?";
}

BinaryRegion PairPlan::matched_outer() const {
    BinaryRegion x(outer.dims());
    std::vector<bool> used(outer_components.size(), false);
    for (const Match& m : matches) {
        if (!used[static_cast<std::size_t>(m.outer)]) {
            used[static_cast<std::size_t>(m.outer)] = true;
            x |= outer_components.components[static_cast<std::size_t>(m.outer)];
        }
    }
    return x;
}

PairPlan plan_pair(const TerEntry& inner, const TerEntry& outer, Connectivity conn) {
    require_same_dims(inner.region.dims(), outer.region.dims(), "plan_pair");
    PairPlan plan;
    plan.inner = inner.region;
    plan.outer = outer.region;
    plan.elev_inner = inner.elevation;
    plan.elev_outer = outer.elevation;
    plan.inner_components = label_components(inner.region, conn);
    plan.outer_components = label_components(outer.region, conn);

    const LabelGrid outer_labels = label_map(outer.region, conn);
    std::vector<int> inner_per_outer(plan.outer_components.size(), 0);
    for (std::size_t i = 0; i < plan.inner_components.size(); ++i) {
        const BinaryRegion& comp = plan.inner_components.components[i];
        const Cell seed = *comp.first_cell();
        const std::int32_t o = outer_labels.at(seed.row, seed.col);
        if (o < 0 || !is_subset(comp, plan.outer_components.components[static_cast<std::size_t>(o)])) {
            throw ContractError("plan_pair: inner region component at " + where(seed) + " (elevation " +
                                fmt_elev(inner.elevation) + ") lies in no outer component");
        }
        plan.matches.push_back({static_cast<int>(i), o});
        ++inner_per_outer[static_cast<std::size_t>(o)];
    }
    bool one_to_one = true;
    for (std::size_t o = 0; o < inner_per_outer.size(); ++o) {
        if (inner_per_outer[o] == 0) {
            plan.orphans.push_back(static_cast<int>(o));
        } else if (inner_per_outer[o] > 1) {
            one_to_one = false;
        }
    }
    plan.category = !plan.orphans.empty() ? PairCategory::Mixed
                    : one_to_one          ? PairCategory::NestedOneToOne
                                          : PairCategory::NestedManyToOne;
    return plan;
}

} // namespace cmorph
