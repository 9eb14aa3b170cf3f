#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace slicefix {

/// One slice as a 2D bit grid with physical pitch.
///
/// Row index increases with +y of the model frame. Anything outside
/// [0,width) x [0,height) reads as background. Set operations and diffs are
/// only defined between rasters with matching width/height/pitch/origin.
class BinaryRaster {
public:
    BinaryRaster() = default;
    BinaryRaster(int width, int height, double pitch_mm,
                 double origin_x_mm = 0.0, double origin_y_mm = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double pitch() const { return pitch_; }
    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }

    bool get(int x, int y) const {
        if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
        return bits_[static_cast<size_t>(y) * width_ + x] != 0;
    }
    void set(int x, int y, bool v) {
        bits_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0;
    }

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    long long foreground_count() const;
    bool empty() const { return foreground_count() == 0; }

    bool comparable_with(const BinaryRaster& other) const;
    bool operator==(const BinaryRaster& other) const;
    bool operator!=(const BinaryRaster& other) const { return !(*this == other); }

    /// Raster with identical metadata and all-background bits.
    BinaryRaster blank_like() const;

private:
    int width_ = 0;
    int height_ = 0;
    double pitch_ = 1.0;
    double origin_x_ = 0.0;
    double origin_y_ = 0.0;
    std::vector<std::uint8_t> bits_;
};

/// Rasterized disk structuring element of physical diameter d.
///
/// Offsets follow the closed-disk rule dx^2 + dy^2 <= radius_px^2, so the set
/// is point-symmetric and erosion/dilation are adjoint without reflection.
struct StructuringElement {
    double diameter_mm = 0.0;
    int radius_px = 0;
    std::vector<std::pair<int, int>> offsets;

    /// Element with an explicit pixel radius. radius_px = 0 is the identity.
    static StructuringElement disk(int radius_px, double diameter_mm = 0.0);
    /// radius_px = round(diameter_mm / (2*pitch)), ties rounding half up.
    static StructuringElement from_diameter(double diameter_mm, double pitch_mm);
};

/// Snapshot of the 8-connected neighborhood of a pixel.
///
/// x1 is the east neighbor and numbering proceeds counter-clockwise
/// (x2=NE, x3=N, x4=NW, x5=W, x6=SW, x7=S, x8=SE). Index arithmetic wraps,
/// so at(9) == at(1).
struct Neighborhood {
    std::array<bool, 8> x{};

    bool at(int k) const { return x[static_cast<size_t>((k - 1) & 7)]; }

    /// Bit pack with bit (k-1) holding x_k; inverse of from_code.
    int code() const {
        int c = 0;
        for (int k = 0; k < 8; ++k)
            if (x[static_cast<size_t>(k)]) c |= 1 << k;
        return c;
    }
    static Neighborhood from_code(int code) {
        Neighborhood n;
        for (int k = 0; k < 8; ++k) n.x[static_cast<size_t>(k)] = (code >> k) & 1;
        return n;
    }
};

/// Pixel offsets matching the Neighborhood numbering, entry k-1 for x_k.
inline constexpr std::array<std::pair<int, int>, 8> kNeighborOffsets = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

BinaryRaster erode(const BinaryRaster& s, const StructuringElement& f);
BinaryRaster dilate(const BinaryRaster& s, const StructuringElement& f);
BinaryRaster open(const BinaryRaster& s, const StructuringElement& f);

/// Neighborhood of an in-bounds pixel; out-of-bounds neighbors read background.
Neighborhood neighborhood(const BinaryRaster& s, int x, int y);

struct DiffCounts {
    long long added = 0;    // in b, not in a
    long long removed = 0;  // in a, not in b
};

/// Pixel counts of b \ a and a \ b. Throws std::invalid_argument when the
/// rasters are not comparable.
DiffCounts symmetric_diff_counts(const BinaryRaster& a, const BinaryRaster& b);

struct ComponentLabels {
    std::vector<int> labels;  // row-major, 0 = background, 1..count
    int count = 0;
};

/// Connected-component labeling; labels are ordered by row-major first pixel.
ComponentLabels connected_components(const BinaryRaster& s, int connectivity);

/// 8-connected foreground components minus 4-connected background holes
/// (the unbounded background component is not a hole).
int euler_number(const BinaryRaster& s);

BinaryRaster raster_union(const BinaryRaster& a, const BinaryRaster& b);
bool raster_subset(const BinaryRaster& a, const BinaryRaster& b);  // a subset of b

/// P5 PGM, maxval 255, foreground = 255. Rows are written top-down, i.e. the
/// highest-y raster row first.
void write_pgm(const BinaryRaster& s, const std::string& path);
/// 8-bit grayscale PNG with the same pixel layout as write_pgm.
void write_png(const BinaryRaster& s, const std::string& path);

}  // namespace slicefix
