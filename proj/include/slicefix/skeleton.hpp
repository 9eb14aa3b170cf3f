#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "slicefix/raster.hpp"

namespace slicefix {

/// Outcome of the per-pixel thinning test, with the first failed condition
/// kept for diagnostics.
struct ThinningDecision {
    enum class Reason { deletable, fail_crossing, fail_neighbor_count, fail_directional };
    bool remove = false;
    Reason reason = Reason::fail_crossing;
};

/// Number of 0 -> {1} transitions around the 8-neighborhood ring.
int crossing_number(const Neighborhood& n);

/// Thinning test for a foreground pixel in subiteration 1 or 2.
ThinningDecision deletable(const Neighborhood& n, int subiteration);

/// One full thinning iteration: subiteration 1 applied to all foreground
/// pixels in parallel (decide on the unmodified raster, then delete), then
/// subiteration 2 the same way on the intermediate result.
BinaryRaster thin_pass(const BinaryRaster& s);

/// Foreground pixels with at most one foreground 8-neighbor.
std::vector<std::pair<int, int>> spur_pixels(const BinaryRaster& s);

struct MesoSkeletonResult {
    BinaryRaster skeleton;
    BinaryRaster erosion;
    int iterations = 0;
    bool converged = false;
};

struct MesoSkeletonOptions {
    bool spur_removal = true;
    /// Called with (iteration, skeleton state) after each loop iteration.
    std::function<void(int, const BinaryRaster&)> snapshot;
};

/// Iterative thinning bounded below by the erosion: each iteration thins,
/// removes spur pixels while the iteration counter is < radius_px, then
/// unions the erosion back in, until the image stops changing. The result is
/// homotopic to the input and satisfies erosion <= skeleton <= input.
MesoSkeletonResult meso_skeleton(const BinaryRaster& s, const StructuringElement& f,
                                 const MesoSkeletonOptions& options = {});

/// Largest printable element diameter for this slice, in pixels: twice the
/// number of image-changing passes of unbounded thinning (no spur removal,
/// no erosion bound) before the image reaches its converged skeleton.
/// Empty slices impose no bound and return nullopt.
std::optional<int> max_element_diameter(const BinaryRaster& s);

}  // namespace slicefix
