#pragma once

// Shared geometry and raster fixtures for the test suites.

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "slicefix/raster.hpp"
#include "slicefix/volume.hpp"

namespace fixtures {

inline constexpr double kPi = 3.141592653589793;

class MeshAccumulator {
public:
    int vertex(const slicefix::Vec3& v) {
        auto [it, inserted] = index_.try_emplace(v, static_cast<int>(mesh_.vertices.size()));
        if (inserted) mesh_.vertices.push_back(v);
        return it->second;
    }
    void triangle(const slicefix::Vec3& a, const slicefix::Vec3& b, const slicefix::Vec3& c) {
        const int ia = vertex(a), ib = vertex(b), ic = vertex(c);
        if (ia == ib || ib == ic || ia == ic) return;
        mesh_.triangles.push_back({ia, ib, ic});
    }
    void quad(const slicefix::Vec3& a, const slicefix::Vec3& b, const slicefix::Vec3& c,
              const slicefix::Vec3& d) {
        triangle(a, b, c);
        triangle(a, c, d);
    }
    slicefix::TriangleMesh take() { return std::move(mesh_); }

private:
    std::map<std::array<double, 3>, int> index_;
    slicefix::TriangleMesh mesh_;
};

/// Axis-aligned box centered at the origin.
inline slicefix::TriangleMesh box_mesh(double sx, double sy, double sz) {
    const double x = sx / 2, y = sy / 2, z = sz / 2;
    MeshAccumulator acc;
    const slicefix::Vec3 p[8] = {{-x, -y, -z}, {x, -y, -z}, {x, y, -z}, {-x, y, -z},
                                 {-x, -y, z},  {x, -y, z},  {x, y, z},  {-x, y, z}};
    acc.quad(p[0], p[3], p[2], p[1]);  // bottom
    acc.quad(p[4], p[5], p[6], p[7]);  // top
    acc.quad(p[0], p[1], p[5], p[4]);  // -y
    acc.quad(p[2], p[3], p[7], p[6]);  // +y
    acc.quad(p[1], p[2], p[6], p[5]);  // +x
    acc.quad(p[3], p[0], p[4], p[7]);  // -x
    return acc.take();
}

/// UV sphere centered at the origin. flip reverses winding (for inner shells).
inline void add_uv_sphere(MeshAccumulator& acc, double radius, int stacks, int slices,
                          bool flip = false) {
    auto point = [&](int st, int sl) -> slicefix::Vec3 {
        const double phi = kPi * st / stacks;           // 0..pi from +z pole
        const double lam = 2.0 * kPi * (sl % slices) / slices;
        return {radius * std::sin(phi) * std::cos(lam), radius * std::sin(phi) * std::sin(lam),
                radius * std::cos(phi)};
    };
    for (int st = 0; st < stacks; ++st) {
        for (int sl = 0; sl < slices; ++sl) {
            const auto a = point(st, sl), b = point(st + 1, sl);
            const auto c = point(st + 1, sl + 1), d = point(st, sl + 1);
            if (flip)
                acc.quad(d, c, b, a);
            else
                acc.quad(a, b, c, d);
        }
    }
}

inline slicefix::TriangleMesh sphere_mesh(double radius, int stacks = 32, int slices = 64) {
    MeshAccumulator acc;
    add_uv_sphere(acc, radius, stacks, slices);
    return acc.take();
}

inline slicefix::TriangleMesh hollow_sphere_mesh(double outer_radius, double wall,
                                                 int stacks = 48, int slices = 96) {
    MeshAccumulator acc;
    add_uv_sphere(acc, outer_radius, stacks, slices);
    add_uv_sphere(acc, outer_radius - wall, stacks, slices, /*flip=*/true);
    return acc.take();
}

/// Surface of revolution of an (r, h) profile polyline about the given axis.
/// axis 'z': ring point (r cos, r sin, h); axis 'y': ring point (r cos, h, r sin).
/// When closed is false the profile must start and end on the axis (r = 0).
inline slicefix::TriangleMesh revolve_mesh(const std::vector<std::pair<double, double>>& profile,
                                           char axis, int segments, bool closed) {
    MeshAccumulator acc;
    auto point = [&](double r, double h, int seg) -> slicefix::Vec3 {
        const double a = 2.0 * kPi * (seg % segments) / segments;
        if (axis == 'y') return {r * std::cos(a), h, r * std::sin(a)};
        return {r * std::cos(a), r * std::sin(a), h};
    };
    const size_t n = profile.size();
    const size_t last = closed ? n : n - 1;
    for (size_t i = 0; i < last; ++i) {
        const auto [r0, h0] = profile[i];
        const auto [r1, h1] = profile[(i + 1) % n];
        for (int s = 0; s < segments; ++s) {
            acc.quad(point(r0, h0, s), point(r0, h0, s + 1), point(r1, h1, s + 1),
                     point(r1, h1, s));
        }
    }
    return acc.take();
}

/// Hollow tube (annular cross-section in every z slice).
inline slicefix::TriangleMesh tube_mesh(double inner_radius, double outer_radius, double height,
                                        int segments = 64) {
    return revolve_mesh({{inner_radius, -height / 2},
                         {outer_radius, -height / 2},
                         {outer_radius, height / 2},
                         {inner_radius, height / 2}},
                        'z', segments, /*closed=*/true);
}

/// Cylinder along y with annular fins: the threaded-cylinder analog. Prints
/// cleanly when the axis is vertical; horizontal slices cut the fins into
/// sub-printable strips.
inline slicefix::TriangleMesh fin_cylinder_mesh(double shank_radius, double fin_radius,
                                                double fin_thickness, double fin_spacing,
                                                int fin_count, int segments = 48) {
    const double length = fin_count * fin_spacing + fin_spacing;
    std::vector<std::pair<double, double>> profile;
    profile.emplace_back(0.0, -length / 2);
    profile.emplace_back(shank_radius, -length / 2);
    for (int i = 0; i < fin_count; ++i) {
        const double y0 = -length / 2 + fin_spacing * (i + 0.5);
        profile.emplace_back(shank_radius, y0);
        profile.emplace_back(fin_radius, y0);
        profile.emplace_back(fin_radius, y0 + fin_thickness);
        profile.emplace_back(shank_radius, y0 + fin_thickness);
    }
    profile.emplace_back(shank_radius, length / 2);
    profile.emplace_back(0.0, length / 2);
    return revolve_mesh(profile, 'y', segments, /*closed=*/false);
}

// ---- raster fixtures ----

inline slicefix::BinaryRaster disk_raster(int radius_px, int pad = 3, double pitch = 1.0) {
    const int n = 2 * radius_px + 2 * pad + 1;
    slicefix::BinaryRaster r(n, n, pitch);
    const int c = n / 2;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if ((x - c) * (x - c) + (y - c) * (y - c) <= radius_px * radius_px)
                r.set(x, y, true);
    return r;
}

inline slicefix::BinaryRaster annulus_raster(int outer_px, int inner_px, int pad = 3) {
    const int n = 2 * outer_px + 2 * pad + 1;
    slicefix::BinaryRaster r(n, n, 1.0);
    const int c = n / 2;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int d2 = (x - c) * (x - c) + (y - c) * (y - c);
            if (d2 <= outer_px * outer_px && d2 >= inner_px * inner_px) r.set(x, y, true);
        }
    }
    return r;
}

inline slicefix::BinaryRaster line_raster(int length, int pad) {
    slicefix::BinaryRaster r(length + 2 * pad, 2 * pad + 1, 1.0);
    for (int x = 0; x < length; ++x) r.set(pad + x, pad, true);
    return r;
}

inline slicefix::BinaryRaster random_raster(std::mt19937& rng, int w, int h, double density) {
    slicefix::BinaryRaster r(w, h, 1.0);
    std::bernoulli_distribution bit(density);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) r.set(x, y, bit(rng));
    return r;
}

/// Random union of chunky disks minus a few punched holes. Components are
/// thick enough that skeletonization cannot erase them outright.
inline slicefix::BinaryRaster random_blob_raster(std::mt19937& rng, int size = 32) {
    slicefix::BinaryRaster r(size, size, 1.0);
    std::uniform_int_distribution<int> coord(4, size - 5);
    std::uniform_int_distribution<int> blob_radius(3, 7);
    std::uniform_int_distribution<int> blob_count(2, 5);
    std::uniform_int_distribution<int> hole_radius(1, 2);
    std::uniform_int_distribution<int> hole_count(0, 2);
    const int nb = blob_count(rng);
    for (int b = 0; b < nb; ++b) {
        const int cx = coord(rng), cy = coord(rng), rad = blob_radius(rng);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= rad * rad) r.set(x, y, true);
    }
    const int nh = hole_count(rng);
    for (int hi = 0; hi < nh; ++hi) {
        const int cx = coord(rng), cy = coord(rng), rad = hole_radius(rng);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= rad * rad) r.set(x, y, false);
    }
    return r;
}

}  // namespace fixtures
