#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmorph/errors.hpp"

namespace cmorph {

struct GridDims {
    int rows = 0;
    int cols = 0;

    GridDims() = default;
    GridDims(int r, int c);

    std::size_t cells() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
    bool contains(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
    friend bool operator==(const GridDims&, const GridDims&) = default;
};

std::string to_string(const GridDims& d);

struct Cell {
    int row = 0;
    int col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

void require_same_dims(const GridDims& a, const GridDims& b, const char* op);

enum class Connectivity { Four = 4, Eight = 8 };

/// Set of cells on a rectangular grid, bit-packed one row at a time
/// (LSB of word 0 is column 0). Bits past the last column are kept zero.
class BinaryRegion {
public:
    using Word = std::uint64_t;
    static constexpr int kWordBits = 64;

    BinaryRegion() = default;
    explicit BinaryRegion(GridDims dims);

    static BinaryRegion full(GridDims dims);
    static BinaryRegion from_cells(GridDims dims, std::span<const Cell> cells);
    // Axis-aligned block [r0, r1) x [c0, c1), clipped to the window.
    static BinaryRegion block(GridDims dims, int r0, int c0, int r1, int c1);

    const GridDims& dims() const { return dims_; }
    int rows() const { return dims_.rows; }
    int cols() const { return dims_.cols; }
    int words_per_row() const { return words_per_row_; }

    bool test(int r, int c) const;
    bool test(Cell p) const { return test(p.row, p.col); }
    void set(int r, int c, bool value = true);
    void set(Cell p, bool value = true) { set(p.row, p.col, value); }

    std::size_t count() const;
    bool empty() const;
    bool is_full() const;
    std::optional<Cell> first_cell() const;
    std::vector<Cell> cells() const;
    bool touches_border() const;

    std::span<Word> row(int r) { return {words_.data() + static_cast<std::size_t>(r) * words_per_row_, static_cast<std::size_t>(words_per_row_)}; }
    std::span<const Word> row(int r) const { return {words_.data() + static_cast<std::size_t>(r) * words_per_row_, static_cast<std::size_t>(words_per_row_)}; }
    // Mask of valid bits in the last word of each row.
    Word tail_mask() const { return tail_mask_; }

    void for_each_cell(const std::function<void(int, int)>& fn) const;

    BinaryRegion& operator|=(const BinaryRegion& o);
    BinaryRegion& operator&=(const BinaryRegion& o);
    BinaryRegion& operator-=(const BinaryRegion& o);

    friend bool operator==(const BinaryRegion& a, const BinaryRegion& b);

private:
    GridDims dims_;
    int words_per_row_ = 0;
    Word tail_mask_ = 0;
    std::vector<Word> words_;
};

BinaryRegion set_union(const BinaryRegion& a, const BinaryRegion& b);
BinaryRegion set_intersect(const BinaryRegion& a, const BinaryRegion& b);
BinaryRegion set_difference(const BinaryRegion& a, const BinaryRegion& b);
BinaryRegion complement(const BinaryRegion& a);
bool is_subset(const BinaryRegion& a, const BinaryRegion& b);
bool intersects(const BinaryRegion& a, const BinaryRegion& b);

inline BinaryRegion operator|(const BinaryRegion& a, const BinaryRegion& b) { return set_union(a, b); }
inline BinaryRegion operator&(const BinaryRegion& a, const BinaryRegion& b) { return set_intersect(a, b); }
inline BinaryRegion operator-(const BinaryRegion& a, const BinaryRegion& b) { return set_difference(a, b); }

/// Per-cell component labels; -1 marks background.
struct LabelGrid {
    GridDims dims;
    std::vector<std::int32_t> labels;
    int count = 0;

    std::int32_t at(int r, int c) const { return labels[static_cast<std::size_t>(r) * dims.cols + c]; }
};

// Labels are assigned in raster-scan order of each component's first cell.
LabelGrid label_map(const BinaryRegion& x, Connectivity conn);

struct ComponentSet {
    BinaryRegion parent;
    Connectivity connectivity = Connectivity::Eight;
    std::vector<BinaryRegion> components;

    std::size_t size() const { return components.size(); }
};

ComponentSet label_components(const BinaryRegion& x, Connectivity conn = Connectivity::Eight);

/// Dense elevation raster. NODATA is stored as quiet NaN.
class ElevationGrid {
public:
    ElevationGrid() = default;
    explicit ElevationGrid(GridDims dims);
    ElevationGrid(GridDims dims, double fill);

    static double nodata();
    static bool is_nodata(double v);

    const GridDims& dims() const { return dims_; }
    int rows() const { return dims_.rows; }
    int cols() const { return dims_.cols; }

    double at(int r, int c) const { return values_[index(r, c)]; }
    double& at(int r, int c) { return values_[index(r, c)]; }
    bool is_nodata(int r, int c) const { return is_nodata(at(r, c)); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    std::size_t nodata_count() const;
    BinaryRegion valid_mask() const;

    friend bool operator==(const ElevationGrid& a, const ElevationGrid& b);

private:
    std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * dims_.cols + c; }

    GridDims dims_;
    std::vector<double> values_;
};

} // namespace cmorph
