#include "slicefix/correct.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "slicefix/parallel.hpp"
#include "slicefix/skeleton.hpp"

namespace slicefix {

SliceCorrection correct_slice(const BinaryRaster& s, const StructuringElement& f,
                              const CorrectOptions& options) {
    MesoSkeletonOptions skel_opts;
    skel_opts.spur_removal = options.spur_removal;
    const MesoSkeletonResult skel = meso_skeleton(s, f, skel_opts);

    SliceCorrection out;
    out.corrected = dilate(skel.skeleton, f);
    out.skeleton_iterations = skel.iterations;
    const DiffCounts diff = symmetric_diff_counts(s, out.corrected);
    out.added = diff.added;
    out.removed = diff.removed;
    if (options.compute_element_sizes)
        out.max_element_diameter_px = max_element_diameter(s);
    return out;
}

CorrectionResult correct_model(const SliceStack& v, const StructuringElement& f,
                               const CorrectOptions& options) {
    if (v.slices.empty()) throw std::invalid_argument("correct_model: empty stack");

    const int n = static_cast<int>(v.slices.size());
    std::vector<SliceCorrection> corrections(static_cast<size_t>(n));
    parallel_for(n, options.threads, [&](int i) {
        corrections[static_cast<size_t>(i)] =
            correct_slice(v.slices[static_cast<size_t>(i)], f, options);
    });

    CorrectionResult result;
    result.corrected.layer_height = v.layer_height;
    result.corrected.z_origin = v.z_origin;
    result.corrected.slices.reserve(static_cast<size_t>(n));

    const double pitch = v.in_plane_pitch();
    const double voxel_mm3 = pitch * pitch * v.layer_height;
    result.report.parameters.min_feature_diameter_mm = f.diameter_mm;
    result.report.parameters.layer_height_mm = v.layer_height;
    result.report.parameters.pitch_mm = pitch;

    for (int i = 0; i < n; ++i) {
        auto& c = corrections[static_cast<size_t>(i)];
        LayerSummary layer;
        layer.index = i;
        layer.z_mm = v.slice_z(i);
        layer.added = c.added;
        layer.removed = c.removed;
        layer.skeleton_iterations = c.skeleton_iterations;
        layer.max_element_diameter_px = c.max_element_diameter_px;
        result.report.per_layer.push_back(layer);
        result.report.total_added += c.added;
        result.report.total_removed += c.removed;
        result.corrected.slices.push_back(std::move(c.corrected));
    }
    result.report.objective = result.report.total_added + result.report.total_removed;
    result.report.added_mm3 = static_cast<double>(result.report.total_added) * voxel_mm3;
    result.report.removed_mm3 = static_cast<double>(result.report.total_removed) * voxel_mm3;
    return result;
}

StackDiff diff_stacks(const SliceStack& a, const SliceStack& b) {
    if (!a.comparable_with(b))
        throw std::invalid_argument("diff_stacks: stacks are not comparable");
    StackDiff out;
    out.added_stack.layer_height = a.layer_height;
    out.added_stack.z_origin = a.z_origin;
    out.removed_stack.layer_height = a.layer_height;
    out.removed_stack.z_origin = a.z_origin;
    for (size_t i = 0; i < a.slices.size(); ++i) {
        const auto& sa = a.slices[i];
        const auto& sb = b.slices[i];
        out.per_layer.push_back(symmetric_diff_counts(sa, sb));
        out.added += out.per_layer.back().added;
        out.removed += out.per_layer.back().removed;
        BinaryRaster add = sa.blank_like();
        BinaryRaster rem = sa.blank_like();
        for (int y = 0; y < sa.height(); ++y) {
            for (int x = 0; x < sa.width(); ++x) {
                const bool in_a = sa.get(x, y), in_b = sb.get(x, y);
                if (in_b && !in_a) add.set(x, y, true);
                if (in_a && !in_b) rem.set(x, y, true);
            }
        }
        out.added_stack.slices.push_back(std::move(add));
        out.removed_stack.slices.push_back(std::move(rem));
    }
    return out;
}

std::vector<ElementSizeEntry> element_size_report(const SliceStack& v, double clamp_min_mm,
                                                  double clamp_max_mm, int threads) {
    if (clamp_min_mm > clamp_max_mm)
        throw std::invalid_argument("element_size_report: clamp_min > clamp_max");
    const double pitch = v.in_plane_pitch();
    const int n = static_cast<int>(v.slices.size());
    std::vector<ElementSizeEntry> out(static_cast<size_t>(n));
    parallel_for(n, threads, [&](int i) {
        ElementSizeEntry e;
        e.index = i;
        e.z_mm = v.slice_z(i);
        e.raw_px = max_element_diameter(v.slices[static_cast<size_t>(i)]);
        if (e.raw_px) {
            e.raw_mm = *e.raw_px * pitch;
            e.clamped_mm = std::clamp(*e.raw_mm, clamp_min_mm, clamp_max_mm);
        } else {
            e.clamped_mm = clamp_max_mm;  // empty layer imposes no bound
        }
        out[static_cast<size_t>(i)] = e;
    });
    return out;
}

std::string CorrectionReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["parameters"] = {{"min_feature_diameter_mm", parameters.min_feature_diameter_mm},
                       {"layer_height_mm", parameters.layer_height_mm},
                       {"pitch_mm", parameters.pitch_mm},
                       {"theta1", parameters.theta1},
                       {"theta2", parameters.theta2}};
    j["layers"] = nlohmann::json::array();
    for (const auto& l : per_layer) {
        nlohmann::json jl = {{"index", l.index},
                             {"z_mm", l.z_mm},
                             {"added", l.added},
                             {"removed", l.removed},
                             {"skeleton_iterations", l.skeleton_iterations}};
        if (l.max_element_diameter_px) {
            jl["max_elem_px"] = *l.max_element_diameter_px;
            jl["max_elem_mm"] = *l.max_element_diameter_px * parameters.pitch_mm;
        } else {
            jl["max_elem_px"] = nullptr;
            jl["max_elem_mm"] = nullptr;
        }
        j["layers"].push_back(jl);
    }
    j["totals"] = {{"added_vox", total_added},
                   {"removed_vox", total_removed},
                   {"added_mm3", added_mm3},
                   {"removed_mm3", removed_mm3},
                   {"objective", objective}};
    return j.dump(2);
}

}  // namespace slicefix
