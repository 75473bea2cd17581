#include "cmorph/morphology.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace cmorph {

using Word = BinaryRegion::Word;
constexpr int kBits = BinaryRegion::kWordBits;

StructuringElement::StructuringElement(std::string name, std::vector<Offset> offsets)
    : name_(std::move(name)), offsets_(std::move(offsets)) {
    const auto has = [&](Offset o) { return std::find(offsets_.begin(), offsets_.end(), o) != offsets_.end(); };
    if (!has({0, 0})) {
        throw InputError("structuring element '" + name_ + "' must contain the origin");
    }
    for (const Offset& o : offsets_) {
        if (!has({-o.drow, -o.dcol})) {
            throw InputError("structuring element '" + name_ + "' must be symmetric about the origin");
        }
        radius_ = std::max({radius_, std::abs(o.drow), std::abs(o.dcol)});
    }
}

StructuringElement StructuringElement::cross3() {
    return {"cross3", {{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
}

StructuringElement StructuringElement::square3() {
    std::vector<Offset> offs;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            offs.push_back({dr, dc});
        }
    }
    return {"square3", std::move(offs)};
}

StructuringElement StructuringElement::by_name(std::string_view name) {
    if (name == "square3") {
        return square3();
    }
    if (name == "cross3") {
        return cross3();
    }
    throw InputError("unknown structuring element '" + std::string(name) + "' (expected square3 or cross3)");
}

namespace {

// dst(c) = src(c + shift), or `fill` where c + shift falls outside [0, cols).
void shift_row(std::span<const Word> src, std::span<Word> dst, int cols, int shift, bool fill, Word tail_mask) {
    const int n = static_cast<int>(src.size());
    const int q = shift >= 0 ? shift / kBits : -((-shift + kBits - 1) / kBits);
    const int s = shift - q * kBits; // 0 <= s < 64
    const auto word_at = [&](int k) -> Word { return (k >= 0 && k < n) ? src[k] : Word{0}; };
    for (int k = 0; k < n; ++k) {
        const Word lo = word_at(k + q);
        const Word hi = word_at(k + q + 1);
        dst[k] = s == 0 ? lo : ((lo >> s) | (hi << (kBits - s)));
    }
    if (fill && shift != 0) {
        // Columns whose source lies outside the window.
        const int first = shift > 0 ? std::max(cols - shift, 0) : 0;
        const int last = shift > 0 ? cols : std::min(-shift, cols);
        for (int c = first; c < last; ++c) {
            dst[c / kBits] |= Word{1} << (c % kBits);
        }
    }
    dst[n - 1] &= tail_mask;
}

enum class Combine { Or, And };

// One step of dilation (Or, outside = 0) or erosion (And, outside = 1 unless
// `outside_fg` is false).
BinaryRegion step(const BinaryRegion& x, const StructuringElement& se, Combine mode, bool outside_fg = true) {
    const bool fill = mode == Combine::And && outside_fg;
    const int rows = x.rows();
    const int wpr = x.words_per_row();

    std::map<int, BinaryRegion> shifted;
    for (const auto& o : se.offsets()) {
        const int sc = mode == Combine::Or ? -o.dcol : o.dcol;
        if (shifted.contains(sc)) {
            continue;
        }
        BinaryRegion h(x.dims());
        for (int r = 0; r < rows; ++r) {
            shift_row(x.row(r), h.row(r), x.cols(), sc, fill, x.tail_mask());
        }
        shifted.emplace(sc, std::move(h));
    }

    BinaryRegion out = mode == Combine::And ? BinaryRegion::full(x.dims()) : BinaryRegion(x.dims());
    for (const auto& o : se.offsets()) {
        const int sr = mode == Combine::Or ? -o.drow : o.drow;
        const int sc = mode == Combine::Or ? -o.dcol : o.dcol;
        const BinaryRegion& h = shifted.at(sc);
        for (int r = 0; r < rows; ++r) {
            const int src = r + sr;
            auto dst = out.row(r);
            if (src < 0 || src >= rows) {
                // Outside rows: zero for dilation (no-op), one for erosion (no-op).
                if (mode == Combine::And && !outside_fg) {
                    std::fill(dst.begin(), dst.end(), Word{0});
                }
                continue;
            }
            auto w = h.row(src);
            if (mode == Combine::Or) {
                for (int k = 0; k < wpr; ++k) dst[k] |= w[k];
            } else {
                for (int k = 0; k < wpr; ++k) dst[k] &= w[k];
            }
        }
    }
    return out;
}

int lambda_cap(const GridDims& d) {
    return d.rows + d.cols;
}

// Erosion step where the cells beyond the window edge next to window cell p
// count as foreground iff p is in `open`.
BinaryRegion bounded_step(const BinaryRegion& x, const StructuringElement& se, const BinaryRegion& open) {
    BinaryRegion out = step(x, se, Combine::And, false);
    const int rows = x.rows();
    const int cols = x.cols();
    const int rad = se.radius();
    const auto fix = [&](int r, int c) {
        if (!x.test(r, c)) {
            return;
        }
        bool keep = true;
        for (const auto& o : se.offsets()) {
            const int rr = r + o.drow;
            const int cc = c + o.dcol;
            const bool v = (rr >= 0 && rr < rows && cc >= 0 && cc < cols)
                               ? x.test(rr, cc)
                               : open.test(std::clamp(rr, 0, rows - 1), std::clamp(cc, 0, cols - 1));
            if (!v) {
                keep = false;
                break;
            }
        }
        out.set(r, c, keep);
    };
    for (int r = 0; r < rows; ++r) {
        const bool edge_row = r < rad || r >= rows - rad;
        for (int c = 0; c < cols; ++c) {
            if (edge_row || c < rad || c >= cols - rad) {
                fix(r, c);
            } else {
                c = cols - rad - 1;
            }
        }
    }
    return out;
}

MedianResult median_impl(const BinaryRegion& inner, const BinaryRegion& outer, const StructuringElement& se,
                         const BinaryRegion* open) {
    require_same_dims(inner.dims(), outer.dims(), "median_set");
    if (inner.empty()) {
        throw ContractError("median_set: inner set is empty");
    }
    if (!is_subset(inner, outer)) {
        throw ContractError("median_set: inner set is not contained in outer set");
    }
    if (open != nullptr) {
        require_same_dims(inner.dims(), open->dims(), "median_set");
    }
    MedianResult result{BinaryRegion(inner.dims()), 0, 0};
    BinaryRegion grown = inner;
    BinaryRegion shrunk = outer;
    for (int lambda = 0; lambda <= lambda_cap(inner.dims()); ++lambda) {
        result.median |= set_intersect(grown, shrunk);
        result.lambda_terms_used = lambda + 1;
        if (is_subset(shrunk, grown)) {
            result.mu = lambda;
            return result;
        }
        grown = step(grown, se, Combine::Or);
        shrunk = open != nullptr ? bounded_step(shrunk, se, *open) : step(shrunk, se, Combine::And);
    }
    throw ContractError("median_set: mu not reached within lambda = rows + cols");
}

void require_nonempty(const BinaryRegion& x, const char* op) {
    if (x.empty()) {
        throw InputError(std::string(op) + ": input set must be nonempty");
    }
}

} // namespace

BinaryRegion dilate(const BinaryRegion& x, const StructuringElement& se, int scale) {
    if (scale < 0) {
        throw ContractError("dilate: negative scale");
    }
    BinaryRegion out = x;
    for (int i = 0; i < scale; ++i) {
        BinaryRegion next = step(out, se, Combine::Or);
        if (next == out) {
            break;
        }
        out = std::move(next);
    }
    return out;
}

BinaryRegion erode(const BinaryRegion& x, const StructuringElement& se, int scale) {
    if (scale < 0) {
        throw ContractError("erode: negative scale");
    }
    BinaryRegion out = x;
    for (int i = 0; i < scale; ++i) {
        BinaryRegion next = step(out, se, Combine::And);
        if (next == out) {
            break;
        }
        out = std::move(next);
    }
    return out;
}

BinaryRegion erode(const BinaryRegion& x, const StructuringElement& se, int scale, const BinaryRegion& open_border) {
    if (scale < 0) {
        throw ContractError("erode: negative scale");
    }
    require_same_dims(x.dims(), open_border.dims(), "erode");
    BinaryRegion out = x;
    for (int i = 0; i < scale; ++i) {
        BinaryRegion next = bounded_step(out, se, open_border);
        if (next == out) {
            break;
        }
        out = std::move(next);
    }
    return out;
}

BinaryRegion morphological_gradient(const BinaryRegion& x, const StructuringElement& se) {
    return set_difference(dilate(x, se, 1), erode(x, se, 1));
}

int hausdorff_dilation_distance(const BinaryRegion& x, const BinaryRegion& y, const StructuringElement& se) {
    require_same_dims(x.dims(), y.dims(), "hausdorff_dilation_distance");
    require_nonempty(x, "hausdorff_dilation_distance");
    require_nonempty(y, "hausdorff_dilation_distance");
    BinaryRegion dx = x;
    BinaryRegion dy = y;
    for (int lambda = 0; lambda <= lambda_cap(x.dims()); ++lambda) {
        if (is_subset(y, dx) && is_subset(x, dy)) {
            return lambda;
        }
        dx = step(dx, se, Combine::Or);
        dy = step(dy, se, Combine::Or);
    }
    throw ContractError("hausdorff_dilation_distance: no mutual containment within lambda cap");
}

int hausdorff_erosion_distance(const BinaryRegion& x, const BinaryRegion& y, const StructuringElement& se) {
    require_same_dims(x.dims(), y.dims(), "hausdorff_erosion_distance");
    require_nonempty(x, "hausdorff_erosion_distance");
    require_nonempty(y, "hausdorff_erosion_distance");
    BinaryRegion ex = x;
    BinaryRegion ey = y;
    for (int lambda = 0; lambda <= lambda_cap(x.dims()); ++lambda) {
        if (is_subset(ey, x) && is_subset(ex, y)) {
            return lambda;
        }
        BinaryRegion nx = step(ex, se, Combine::And);
        BinaryRegion ny = step(ey, se, Combine::And);
        if (nx == ex && ny == ey) {
            break; // both erosions are stationary (window-edge sets); no finite distance
        }
        ex = std::move(nx);
        ey = std::move(ny);
    }
    throw InputError("hausdorff_erosion_distance: erosions never become mutually contained "
                     "(a set anchored on the window edge does not erode away)");
}

MedianResult median_set(const BinaryRegion& inner, const BinaryRegion& outer, const StructuringElement& se) {
    return median_impl(inner, outer, se, nullptr);
}

MedianResult median_set(const BinaryRegion& inner, const BinaryRegion& outer, const StructuringElement& se,
                        const BinaryRegion& open_border) {
    return median_impl(inner, outer, se, &open_border);
}

UltimateErosion ultimate_erosion(const BinaryRegion& x, const StructuringElement& se, Connectivity conn) {
    require_nonempty(x, "ultimate_erosion");
    UltimateErosion out{BinaryRegion(x.dims()), 0};
    for (const BinaryRegion& comp : label_components(x, conn).components) {
        BinaryRegion last = comp;
        int scale = 0;
        for (;;) {
            BinaryRegion next = step(last, se, Combine::And);
            if (next.empty() || next == last) {
                break;
            }
            last = std::move(next);
            ++scale;
        }
        out.region |= last;
        out.scale = std::max(out.scale, scale);
    }
    return out;
}

} // namespace cmorph
