#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slicefix/raster.hpp"
#include "slicefix/volume.hpp"

namespace slicefix {

/// One corrected slice: the dilated meso-skeleton plus diff metrics.
struct SliceCorrection {
    BinaryRaster corrected;
    long long added = 0;
    long long removed = 0;
    int skeleton_iterations = 0;
    std::optional<int> max_element_diameter_px;  // nullopt = unbounded (empty slice)
};

struct CorrectionParameters {
    double min_feature_diameter_mm = 0.0;
    double layer_height_mm = 0.0;
    double pitch_mm = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

struct LayerSummary {
    int index = 0;
    double z_mm = 0.0;
    long long added = 0;
    long long removed = 0;
    int skeleton_iterations = 0;
    std::optional<int> max_element_diameter_px;
};

struct CorrectionReport {
    CorrectionParameters parameters;
    std::vector<LayerSummary> per_layer;
    long long total_added = 0;
    long long total_removed = 0;
    long long objective = 0;  // total_added + total_removed, in voxels
    double added_mm3 = 0.0;
    double removed_mm3 = 0.0;

    std::string to_json() const;
};

struct CorrectOptions {
    bool spur_removal = true;
    bool compute_element_sizes = true;
    int threads = 1;
};

/// Algorithm core for one layer: corrected = dilate(meso_skeleton(s, f), f).
SliceCorrection correct_slice(const BinaryRaster& s, const StructuringElement& f,
                              const CorrectOptions& options = {});

struct CorrectionResult {
    SliceStack corrected;
    CorrectionReport report;
};

/// Applies correct_slice to every layer (optionally in parallel; output is
/// identical for any thread count) and assembles the report.
CorrectionResult correct_model(const SliceStack& v, const StructuringElement& f,
                               const CorrectOptions& options = {});

struct StackDiff {
    long long added = 0;
    long long removed = 0;
    std::vector<DiffCounts> per_layer;
    SliceStack added_stack;    // voxels in b only
    SliceStack removed_stack;  // voxels in a only
};

/// Exact voxel set difference between comparable stacks; the added/removed
/// stacks can be exported as meshes via extract_surface.
StackDiff diff_stacks(const SliceStack& a, const SliceStack& b);

struct ElementSizeEntry {
    int index = 0;
    double z_mm = 0.0;
    std::optional<int> raw_px;   // nullopt = unbounded (empty layer)
    std::optional<double> raw_mm;
    double clamped_mm = 0.0;
};

/// Per-layer maximum structuring-element size, raw and clamped to
/// [clamp_min_mm, clamp_max_mm]. Empty layers clamp to the range maximum,
/// sub-resolution layers to the range minimum.
std::vector<ElementSizeEntry> element_size_report(const SliceStack& v, double clamp_min_mm,
                                                  double clamp_max_mm, int threads = 1);

}  // namespace slicefix
