#include "cmorph/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace cmorph {

GridDims::GridDims(int r, int c) : rows(r), cols(c) {
    if (r < 1 || c < 1) {
        throw InputError("grid dimensions must be positive, got " + std::to_string(r) + "x" + std::to_string(c));
    }
}

std::string to_string(const GridDims& d) {
    return std::to_string(d.rows) + "x" + std::to_string(d.cols);
}

void require_same_dims(const GridDims& a, const GridDims& b, const char* op) {
    if (!(a == b)) {
        throw ContractError(std::string(op) + ": dimension mismatch " + to_string(a) + " vs " + to_string(b));
    }
}

// ---------------------------------------------------------------------------
// BinaryRegion

BinaryRegion::BinaryRegion(GridDims dims)
    : dims_(dims),
      words_per_row_((dims.cols + kWordBits - 1) / kWordBits),
      words_(static_cast<std::size_t>(dims.rows) * words_per_row_, 0) {
    const int tail = dims.cols % kWordBits;
    tail_mask_ = tail == 0 ? ~Word{0} : ((Word{1} << tail) - 1);
}

BinaryRegion BinaryRegion::full(GridDims dims) {
    BinaryRegion x(dims);
    for (int r = 0; r < dims.rows; ++r) {
        auto w = x.row(r);
        std::fill(w.begin(), w.end(), ~Word{0});
        w.back() &= x.tail_mask_;
    }
    return x;
}

BinaryRegion BinaryRegion::from_cells(GridDims dims, std::span<const Cell> cells) {
    BinaryRegion x(dims);
    for (const Cell& p : cells) {
        x.set(p);
    }
    return x;
}

BinaryRegion BinaryRegion::block(GridDims dims, int r0, int c0, int r1, int c1) {
    BinaryRegion x(dims);
    for (int r = std::max(r0, 0); r < std::min(r1, dims.rows); ++r) {
        for (int c = std::max(c0, 0); c < std::min(c1, dims.cols); ++c) {
            x.set(r, c);
        }
    }
    return x;
}

bool BinaryRegion::test(int r, int c) const {
    if (!dims_.contains(r, c)) {
        return false;
    }
    return (row(r)[c / kWordBits] >> (c % kWordBits)) & 1U;
}

void BinaryRegion::set(int r, int c, bool value) {
    if (!dims_.contains(r, c)) {
        throw ContractError("BinaryRegion::set: cell (" + std::to_string(r) + "," + std::to_string(c) +
                            ") outside " + to_string(dims_));
    }
    Word& w = row(r)[c / kWordBits];
    const Word bit = Word{1} << (c % kWordBits);
    w = value ? (w | bit) : (w & ~bit);
}

std::size_t BinaryRegion::count() const {
    std::size_t n = 0;
    for (Word w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

bool BinaryRegion::empty() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

bool BinaryRegion::is_full() const {
    return count() == dims_.cells();
}

std::optional<Cell> BinaryRegion::first_cell() const {
    for (int r = 0; r < rows(); ++r) {
        auto w = row(r);
        for (int k = 0; k < words_per_row_; ++k) {
            if (w[k] != 0) {
                return Cell{r, k * kWordBits + std::countr_zero(w[k])};
            }
        }
    }
    return std::nullopt;
}

std::vector<Cell> BinaryRegion::cells() const {
    std::vector<Cell> out;
    out.reserve(count());
    for_each_cell([&](int r, int c) { out.push_back({r, c}); });
    return out;
}

bool BinaryRegion::touches_border() const {
    if (empty()) {
        return false;
    }
    for (int c = 0; c < cols(); ++c) {
        if (test(0, c) || test(rows() - 1, c)) {
            return true;
        }
    }
    for (int r = 0; r < rows(); ++r) {
        if (test(r, 0) || test(r, cols() - 1)) {
            return true;
        }
    }
    return false;
}

void BinaryRegion::for_each_cell(const std::function<void(int, int)>& fn) const {
    for (int r = 0; r < rows(); ++r) {
        auto w = row(r);
        for (int k = 0; k < words_per_row_; ++k) {
            Word bits = w[k];
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                fn(r, k * kWordBits + b);
                bits &= bits - 1;
            }
        }
    }
}

BinaryRegion& BinaryRegion::operator|=(const BinaryRegion& o) {
    require_same_dims(dims_, o.dims_, "set_union");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] |= o.words_[i];
    }
    return *this;
}

BinaryRegion& BinaryRegion::operator&=(const BinaryRegion& o) {
    require_same_dims(dims_, o.dims_, "set_intersect");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] &= o.words_[i];
    }
    return *this;
}

BinaryRegion& BinaryRegion::operator-=(const BinaryRegion& o) {
    require_same_dims(dims_, o.dims_, "set_difference");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] &= ~o.words_[i];
    }
    return *this;
}

bool operator==(const BinaryRegion& a, const BinaryRegion& b) {
    return a.dims_ == b.dims_ && a.words_ == b.words_;
}

BinaryRegion set_union(const BinaryRegion& a, const BinaryRegion& b) {
    BinaryRegion out = a;
    out |= b;
    return out;
}

BinaryRegion set_intersect(const BinaryRegion& a, const BinaryRegion& b) {
    BinaryRegion out = a;
    out &= b;
    return out;
}

BinaryRegion set_difference(const BinaryRegion& a, const BinaryRegion& b) {
    BinaryRegion out = a;
    out -= b;
    return out;
}

BinaryRegion complement(const BinaryRegion& a) {
    BinaryRegion out = a;
    for (int r = 0; r < out.rows(); ++r) {
        auto w = out.row(r);
        for (auto& word : w) {
            word = ~word;
        }
        w.back() &= out.tail_mask();
    }
    return out;
}

bool is_subset(const BinaryRegion& a, const BinaryRegion& b) {
    require_same_dims(a.dims(), b.dims(), "is_subset");
    for (int r = 0; r < a.rows(); ++r) {
        auto wa = a.row(r);
        auto wb = b.row(r);
        for (int k = 0; k < a.words_per_row(); ++k) {
            if ((wa[k] & ~wb[k]) != 0) {
                return false;
            }
        }
    }
    return true;
}

bool intersects(const BinaryRegion& a, const BinaryRegion& b) {
    require_same_dims(a.dims(), b.dims(), "intersects");
    for (int r = 0; r < a.rows(); ++r) {
        auto wa = a.row(r);
        auto wb = b.row(r);
        for (int k = 0; k < a.words_per_row(); ++k) {
            if ((wa[k] & wb[k]) != 0) {
                return true;
            }
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Component labeling

LabelGrid label_map(const BinaryRegion& x, Connectivity conn) {
    const GridDims dims = x.dims();
    LabelGrid out{dims, std::vector<std::int32_t>(dims.cells(), -1), 0};

    static constexpr int kDr[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
    static constexpr int kDc[8] = {0, 0, -1, 1, -1, 1, -1, 1};
    const int nbrs = conn == Connectivity::Four ? 4 : 8;

    std::vector<Cell> stack;
    x.for_each_cell([&](int r0, int c0) {
        const std::size_t i0 = static_cast<std::size_t>(r0) * dims.cols + c0;
        if (out.labels[i0] >= 0) {
            return;
        }
        const std::int32_t label = out.count++;
        out.labels[i0] = label;
        stack.push_back({r0, c0});
        while (!stack.empty()) {
            const Cell p = stack.back();
            stack.pop_back();
            for (int k = 0; k < nbrs; ++k) {
                const int r = p.row + kDr[k];
                const int c = p.col + kDc[k];
                if (!dims.contains(r, c) || !x.test(r, c)) {
                    continue;
                }
                const std::size_t i = static_cast<std::size_t>(r) * dims.cols + c;
                if (out.labels[i] < 0) {
                    out.labels[i] = label;
                    stack.push_back({r, c});
                }
            }
        }
    });
    return out;
}

ComponentSet label_components(const BinaryRegion& x, Connectivity conn) {
    const LabelGrid labels = label_map(x, conn);
    ComponentSet out{x, conn, std::vector<BinaryRegion>(static_cast<std::size_t>(labels.count), BinaryRegion(x.dims()))};
    x.for_each_cell([&](int r, int c) { out.components[static_cast<std::size_t>(labels.at(r, c))].set(r, c); });
    return out;
}

// ---------------------------------------------------------------------------
// ElevationGrid

ElevationGrid::ElevationGrid(GridDims dims) : ElevationGrid(dims, nodata()) {}

ElevationGrid::ElevationGrid(GridDims dims, double fill) : dims_(dims), values_(dims.cells(), fill) {}

double ElevationGrid::nodata() {
    return std::numeric_limits<double>::quiet_NaN();
}

bool ElevationGrid::is_nodata(double v) {
    return std::isnan(v);
}

std::size_t ElevationGrid::nodata_count() const {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return is_nodata(v); }));
}

BinaryRegion ElevationGrid::valid_mask() const {
    BinaryRegion m(dims_);
    for (int r = 0; r < rows(); ++r) {
        for (int c = 0; c < cols(); ++c) {
            if (!is_nodata(r, c)) {
                m.set(r, c);
            }
        }
    }
    return m;
}

bool operator==(const ElevationGrid& a, const ElevationGrid& b) {
    if (!(a.dims_ == b.dims_)) {
        return false;
    }
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        const double x = a.values_[i];
        const double y = b.values_[i];
        if (ElevationGrid::is_nodata(x) != ElevationGrid::is_nodata(y)) {
            return false;
        }
        if (!ElevationGrid::is_nodata(x) && x != y) {
            return false;
        }
    }
    return true;
}

} // namespace cmorph
