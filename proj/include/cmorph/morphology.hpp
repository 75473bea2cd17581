#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmorph/raster.hpp"

namespace cmorph {

/// Flat structuring element: a set of offsets that contains the origin and
/// is symmetric about it.
class StructuringElement {
public:
    struct Offset {
        int drow = 0;
        int dcol = 0;
        friend bool operator==(const Offset&, const Offset&) = default;
    };

    static StructuringElement cross3();
    static StructuringElement square3();
    // Accepts "cross3" or "square3".
    static StructuringElement by_name(std::string_view name);

    StructuringElement(std::string name, std::vector<Offset> offsets);

    const std::string& name() const { return name_; }
    const std::vector<Offset>& offsets() const { return offsets_; }
    int radius() const { return radius_; }

private:
    std::string name_;
    std::vector<Offset> offsets_;
    int radius_ = 0;
};

// Out-of-window translates are dropped.
BinaryRegion dilate(const BinaryRegion& x, const StructuringElement& se, int scale = 1);
// Out-of-window cells count as foreground, so the window edge never erodes.
BinaryRegion erode(const BinaryRegion& x, const StructuringElement& se, int scale = 1);
// Same, except beyond-edge cells next to a window cell p count as foreground
// only when p is in open_border.
BinaryRegion erode(const BinaryRegion& x, const StructuringElement& se, int scale, const BinaryRegion& open_border);
BinaryRegion morphological_gradient(const BinaryRegion& x, const StructuringElement& se);

int hausdorff_dilation_distance(const BinaryRegion& x, const BinaryRegion& y, const StructuringElement& se);
int hausdorff_erosion_distance(const BinaryRegion& x, const BinaryRegion& y, const StructuringElement& se);

struct MedianResult {
    BinaryRegion median;
    int mu = 0;
    int lambda_terms_used = 0;
};

/// Serra median of nested sets inner ⊆ outer: the union over λ of
/// dilate(inner, λ) ∩ erode(outer, λ). Terms past μ, the first λ at which the
/// dilation covers the erosion, are contained in the μ term and skipped.
MedianResult median_set(const BinaryRegion& inner, const BinaryRegion& outer, const StructuringElement& se);
// Median whose erosions use the open_border rule above.
MedianResult median_set(const BinaryRegion& inner, const BinaryRegion& outer, const StructuringElement& se,
                        const BinaryRegion& open_border);

struct UltimateErosion {
    BinaryRegion region;
    int scale = 0;
};

// Last nonempty erosion, taken per connected component and unioned.
UltimateErosion ultimate_erosion(const BinaryRegion& x, const StructuringElement& se,
                                 Connectivity conn = Connectivity::Eight);

} // namespace cmorph
