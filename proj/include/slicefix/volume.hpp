#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slicefix/raster.hpp"

namespace slicefix {

using Vec3 = std::array<double, 3>;

/// Boundary surface as an indexed triangle soup with consistent outward
/// winding. Vertices are deduplicated on load by exact coordinate match.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    Vec3 bbox_min() const;
    Vec3 bbox_max() const;
    double bbox_diagonal() const;

    /// Edges referenced by exactly one triangle; zero for a closed surface.
    int open_edge_count() const;
};

/// Build-direction Euler angle pair. theta1 rotates about x, theta2 about z.
struct Orientation {
    double theta1 = 0.0;  // [-pi/2, pi/2]
    double theta2 = 0.0;  // [0, pi]

    Orientation() = default;
    Orientation(double t1, double t2);
};

enum class MeshFormat { binary_stl, obj };

/// Reads binary/ASCII STL or OBJ (by extension and content sniffing).
TriangleMesh load_mesh(const std::string& path);
void save_mesh(const TriangleMesh& m, const std::string& path, MeshFormat format);
/// Picks the format from the file extension (.stl -> binary STL, .obj -> OBJ).
void save_mesh(const TriangleMesh& m, const std::string& path);

/// Applies R = Rz(theta2) * Rx(theta1) to every vertex; (0,0) is the identity.
TriangleMesh rotate_mesh(const TriangleMesh& m, const Orientation& o);

/// Ordered slice rasters, index 0 at the lowest z. Slice i is sampled at the
/// plane z = z_origin + (i + 0.5) * layer_height.
struct SliceStack {
    std::vector<BinaryRaster> slices;
    double layer_height = 0.0;
    double z_origin = 0.0;

    double in_plane_pitch() const { return slices.empty() ? 0.0 : slices.front().pitch(); }
    double slice_z(int i) const { return z_origin + (i + 0.5) * layer_height; }
    long long foreground_count() const;
    bool comparable_with(const SliceStack& other) const;
};

struct VoxelizeStats {
    int open_edges = 0;
    int odd_parity_rows = 0;  // scanlines with an odd crossing count (open mesh)
    bool watertight() const { return open_edges == 0 && odd_parity_rows == 0; }
};

/// Slices the mesh at layer center planes and rasterizes the cross-section
/// with even-odd fill at pixel centers. The grid is padded by `padding`
/// background pixels on all four sides.
SliceStack voxelize(const TriangleMesh& m, double layer_height, double in_plane_pitch,
                    int padding, VoxelizeStats* stats = nullptr);

/// Blocky voxel-face boundary surface: two triangles per exposed voxel face,
/// watertight and consistently wound.
TriangleMesh extract_surface(const SliceStack& v);

}  // namespace slicefix
