#include "slicefix/volume.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace slicefix {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm2(const Vec3& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

}  // namespace

Vec3 TriangleMesh::bbox_min() const {
    Vec3 lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
               std::numeric_limits<double>::max()};
    for (const auto& v : vertices)
        for (int i = 0; i < 3; ++i) lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], v[static_cast<size_t>(i)]);
    return lo;
}

Vec3 TriangleMesh::bbox_max() const {
    Vec3 hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
               std::numeric_limits<double>::lowest()};
    for (const auto& v : vertices)
        for (int i = 0; i < 3; ++i) hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], v[static_cast<size_t>(i)]);
    return hi;
}

double TriangleMesh::bbox_diagonal() const {
    if (vertices.empty()) return 0.0;
    return std::sqrt(norm2(sub(bbox_max(), bbox_min())));
}

int TriangleMesh::open_edge_count() const {
    std::map<std::pair<int, int>, int> usage;
    for (const auto& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[static_cast<size_t>(e)], b = t[static_cast<size_t>((e + 1) % 3)];
            if (a > b) std::swap(a, b);
            ++usage[{a, b}];
        }
    }
    int open = 0;
    for (const auto& [edge, count] : usage)
        if (count != 2) ++open;
    return open;
}

Orientation::Orientation(double t1, double t2) : theta1(t1), theta2(t2) {
    constexpr double half_pi = 1.5707963267948966;
    constexpr double pi = 3.141592653589793;
    const double tol = 1e-12;
    if (t1 < -half_pi - tol || t1 > half_pi + tol)
        throw std::invalid_argument("Orientation: theta1 outside [-pi/2, pi/2]");
    if (t2 < -tol || t2 > pi + tol)
        throw std::invalid_argument("Orientation: theta2 outside [0, pi]");
}

namespace {

struct MeshBuilder {
    std::map<std::array<double, 3>, int> index;
    TriangleMesh mesh;

    int vertex(const Vec3& v) {
        auto [it, inserted] = index.try_emplace(v, static_cast<int>(mesh.vertices.size()));
        if (inserted) mesh.vertices.push_back(v);
        return it->second;
    }

    void triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
        const int ia = vertex(a), ib = vertex(b), ic = vertex(c);
        if (ia == ib || ib == ic || ia == ic) return;
        if (norm2(cross(sub(b, a), sub(c, a))) == 0.0) return;
        mesh.triangles.push_back({ia, ib, ic});
    }
};

std::string lowercase_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

TriangleMesh parse_binary_stl(const std::string& path, const std::string& data) {
    std::uint32_t count = 0;
    std::memcpy(&count, data.data() + 80, 4);
    const size_t expected = 84 + static_cast<size_t>(count) * 50;
    if (data.size() != expected) {
        std::ostringstream msg;
        msg << "load_mesh: " << path << ": binary STL declares " << count
            << " triangles (" << expected << " bytes) but file has " << data.size()
            << " bytes";
        throw std::runtime_error(msg.str());
    }
    MeshBuilder b;
    for (std::uint32_t t = 0; t < count; ++t) {
        const char* rec = data.data() + 84 + static_cast<size_t>(t) * 50;
        Vec3 v[3];
        for (int i = 0; i < 3; ++i) {
            float c[3];
            std::memcpy(c, rec + 12 + i * 12, 12);
            v[i] = {static_cast<double>(c[0]), static_cast<double>(c[1]),
                    static_cast<double>(c[2])};
        }
        b.triangle(v[0], v[1], v[2]);
    }
    return b.mesh;
}

TriangleMesh parse_ascii_stl(const std::string& path, const std::string& data) {
    MeshBuilder b;
    std::istringstream in(data);
    std::string tok;
    std::vector<Vec3> pending;
    while (in >> tok) {
        if (tok == "vertex") {
            Vec3 v;
            if (!(in >> v[0] >> v[1] >> v[2]))
                throw std::runtime_error("load_mesh: " + path + ": malformed ASCII STL vertex");
            pending.push_back(v);
            if (pending.size() == 3) {
                b.triangle(pending[0], pending[1], pending[2]);
                pending.clear();
            }
        }
    }
    if (!pending.empty())
        throw std::runtime_error("load_mesh: " + path + ": ASCII STL with dangling vertices");
    return b.mesh;
}

TriangleMesh parse_obj(const std::string& path, const std::string& data) {
    TriangleMesh mesh;
    std::istringstream in(data);
    std::string line;
    auto face_index = [&](const std::string& field) {
        // "idx", "idx/..", "idx//.."
        int idx = std::stoi(field);
        if (idx < 0) idx = static_cast<int>(mesh.vertices.size()) + idx + 1;
        if (idx < 1 || idx > static_cast<int>(mesh.vertices.size()))
            throw std::runtime_error("load_mesh: " + path + ": OBJ face index out of range");
        return idx - 1;
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v[0] >> v[1] >> v[2]))
                throw std::runtime_error("load_mesh: " + path + ": malformed OBJ vertex");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string field;
            while (ls >> field) idx.push_back(face_index(field.substr(0, field.find('/'))));
            if (idx.size() < 3)
                throw std::runtime_error("load_mesh: " + path + ": OBJ face with < 3 vertices");
            for (size_t i = 1; i + 1 < idx.size(); ++i)
                mesh.triangles.push_back({idx[0], idx[i], idx[i + 1]});
        }
    }
    // drop degenerates, matching the STL path
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : mesh.triangles) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
        const Vec3 a = mesh.vertices[static_cast<size_t>(t[0])];
        const Vec3 b = mesh.vertices[static_cast<size_t>(t[1])];
        const Vec3 c = mesh.vertices[static_cast<size_t>(t[2])];
        if (norm2(cross(sub(b, a), sub(c, a))) == 0.0) continue;
        kept.push_back(t);
    }
    mesh.triangles = std::move(kept);
    return mesh;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    TriangleMesh mesh;
    if (lowercase_ext(path) == ".obj") {
        mesh = parse_obj(path, data);
    } else {
        const bool looks_ascii =
            data.rfind("solid", 0) == 0 && data.find("facet") != std::string::npos;
        if (looks_ascii) {
            mesh = parse_ascii_stl(path, data);
        } else {
            if (data.size() < 84)
                throw std::runtime_error("load_mesh: " + path + ": file too short for binary STL");
            mesh = parse_binary_stl(path, data);
        }
    }
    if (mesh.triangles.empty())
        throw std::runtime_error("load_mesh: " + path + ": no triangles");
    return mesh;
}

namespace {

void write_binary_stl(const TriangleMesh& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_mesh: cannot open " + path);
    char header[80] = {};
    std::strncpy(header, "slicefix binary STL", sizeof(header) - 1);
    out.write(header, 80);
    const std::uint32_t count = static_cast<std::uint32_t>(m.triangles.size());
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (const auto& t : m.triangles) {
        const Vec3 a = m.vertices[static_cast<size_t>(t[0])];
        const Vec3 b = m.vertices[static_cast<size_t>(t[1])];
        const Vec3 c = m.vertices[static_cast<size_t>(t[2])];
        Vec3 n = cross(sub(b, a), sub(c, a));
        const double len = std::sqrt(norm2(n));
        if (len > 0.0)
            for (auto& v : n) v /= len;
        float rec[12] = {
            static_cast<float>(n[0]), static_cast<float>(n[1]), static_cast<float>(n[2]),
            static_cast<float>(a[0]), static_cast<float>(a[1]), static_cast<float>(a[2]),
            static_cast<float>(b[0]), static_cast<float>(b[1]), static_cast<float>(b[2]),
            static_cast<float>(c[0]), static_cast<float>(c[1]), static_cast<float>(c[2])};
        out.write(reinterpret_cast<const char*>(rec), 48);
        const std::uint16_t attr = 0;
        out.write(reinterpret_cast<const char*>(&attr), 2);
    }
    if (!out) throw std::runtime_error("save_mesh: write failed for " + path);
}

void write_obj(const TriangleMesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_mesh: cannot open " + path);
    out.precision(12);
    for (const auto& v : m.vertices) out << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
    for (const auto& t : m.triangles)
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    if (!out) throw std::runtime_error("save_mesh: write failed for " + path);
}

}  // namespace

void save_mesh(const TriangleMesh& m, const std::string& path, MeshFormat format) {
    if (m.triangles.empty()) throw std::runtime_error("save_mesh: empty mesh");
    if (format == MeshFormat::binary_stl)
        write_binary_stl(m, path);
    else
        write_obj(m, path);
}

void save_mesh(const TriangleMesh& m, const std::string& path) {
    save_mesh(m, path, lowercase_ext(path) == ".obj" ? MeshFormat::obj : MeshFormat::binary_stl);
}

TriangleMesh rotate_mesh(const TriangleMesh& m, const Orientation& o) {
    const double c1 = std::cos(o.theta1), s1 = std::sin(o.theta1);
    const double c2 = std::cos(o.theta2), s2 = std::sin(o.theta2);
    // R = Rz(theta2) * Rx(theta1)
    const double r[3][3] = {{c2, -s2 * c1, s2 * s1},
                            {s2, c2 * c1, -c2 * s1},
                            {0.0, s1, c1}};
    TriangleMesh out = m;
    for (auto& v : out.vertices) {
        const Vec3 p = v;
        for (int i = 0; i < 3; ++i)
            v[static_cast<size_t>(i)] = r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2];
    }
    return out;
}

long long SliceStack::foreground_count() const {
    long long total = 0;
    for (const auto& s : slices) total += s.foreground_count();
    return total;
}

bool SliceStack::comparable_with(const SliceStack& other) const {
    if (slices.size() != other.slices.size()) return false;
    if (layer_height != other.layer_height || z_origin != other.z_origin) return false;
    for (size_t i = 0; i < slices.size(); ++i)
        if (!slices[i].comparable_with(other.slices[i])) return false;
    return true;
}

SliceStack voxelize(const TriangleMesh& m, double layer_height, double in_plane_pitch,
                    int padding, VoxelizeStats* stats) {
    if (m.vertices.empty() || m.triangles.empty())
        throw std::invalid_argument("voxelize: empty mesh");
    if (!(layer_height > 0.0) || !(in_plane_pitch > 0.0))
        throw std::invalid_argument("voxelize: layer_height and pitch must be > 0");
    if (padding < 0) throw std::invalid_argument("voxelize: negative padding");

    const Vec3 lo = m.bbox_min();
    const Vec3 hi = m.bbox_max();
    const double diag = m.bbox_diagonal();
    if (!(diag > 0.0)) throw std::runtime_error("voxelize: degenerate mesh extent");

    if (hi[2] - lo[2] < layer_height * (1.0 - 1e-9))
        throw std::runtime_error("voxelize: mesh thinner than one layer");
    const int nz = static_cast<int>(std::ceil((hi[2] - lo[2]) / layer_height - 1e-9));

    // vertices exactly on a slice plane get nudged by +eps in z
    const double eps = 1e-9 * diag;
    std::vector<Vec3> verts = m.vertices;
    for (auto& v : verts) {
        const double rel = (v[2] - lo[2]) / layer_height - 0.5;
        const double plane_z = lo[2] + (std::round(rel) + 0.5) * layer_height;
        if (std::abs(v[2] - plane_z) < eps) v[2] = plane_z + eps;
    }

    const double p = in_plane_pitch;
    const int nx_core = std::max(1, static_cast<int>(std::ceil((hi[0] - lo[0]) / p - 1e-9)));
    const int ny_core = std::max(1, static_cast<int>(std::ceil((hi[1] - lo[1]) / p - 1e-9)));
    const int width = nx_core + 2 * padding;
    const int height = ny_core + 2 * padding;
    const double origin_x = lo[0] + 0.5 * p - padding * p;
    const double origin_y = lo[1] + 0.5 * p - padding * p;

    SliceStack stack;
    stack.layer_height = layer_height;
    stack.z_origin = lo[2];

    VoxelizeStats local;
    local.open_edges = m.open_edge_count();

    // Sample a hair off the exact pixel center. Segment junction points are
    // interpolated separately by the two triangles sharing a face diagonal and
    // can disagree in the last ulp; when such a junction lands exactly on the
    // sampling lattice the half-open crossing rule would count the row 0 or 2
    // times. The fixed sub-pixel offset keeps every comparison consistent.
    const double sample_off = 1e-7 * p;

    std::vector<std::vector<double>> row_crossings(static_cast<size_t>(height));
    for (int i = 0; i < nz; ++i) {
        const double zc = stack.slice_z(i);
        BinaryRaster slice(width, height, p, origin_x, origin_y);

        for (auto& rc : row_crossings) rc.clear();

        for (const auto& t : m.triangles) {
            const Vec3& a = verts[static_cast<size_t>(t[0])];
            const Vec3& b = verts[static_cast<size_t>(t[1])];
            const Vec3& c = verts[static_cast<size_t>(t[2])];
            // plane crossing segment of the triangle
            double sx[2], sy[2];
            int nhits = 0;
            const Vec3* e[3][2] = {{&a, &b}, {&b, &c}, {&c, &a}};
            for (int k = 0; k < 3 && nhits < 2; ++k) {
                const Vec3& u = *e[k][0];
                const Vec3& v = *e[k][1];
                if ((u[2] - zc) * (v[2] - zc) >= 0.0) continue;
                const double f = (zc - u[2]) / (v[2] - u[2]);
                sx[nhits] = u[0] + f * (v[0] - u[0]);
                sy[nhits] = u[1] + f * (v[1] - u[1]);
                ++nhits;
            }
            if (nhits != 2) continue;
            // scanline crossings, half-open in y
            double x0 = sx[0], y0 = sy[0], x1 = sx[1], y1 = sy[1];
            if (y0 > y1) {
                std::swap(x0, x1);
                std::swap(y0, y1);
            }
            if (y0 == y1) continue;
            int r0 = static_cast<int>(std::ceil((y0 - origin_y - sample_off) / p));
            int r1 = static_cast<int>(std::ceil((y1 - origin_y - sample_off) / p)) - 1;
            r0 = std::max(r0, 0);
            r1 = std::min(r1, height - 1);
            for (int r = r0; r <= r1; ++r) {
                const double yc = origin_y + r * p + sample_off;
                const double f = (yc - y0) / (y1 - y0);
                row_crossings[static_cast<size_t>(r)].push_back(x0 + f * (x1 - x0));
            }
        }

        for (int r = 0; r < height; ++r) {
            auto& xs = row_crossings[static_cast<size_t>(r)];
            if (xs.empty()) continue;
            std::sort(xs.begin(), xs.end());
            if (xs.size() % 2 != 0) {
                ++local.odd_parity_rows;
                xs.pop_back();
            }
            for (size_t k = 0; k + 1 < xs.size(); k += 2) {
                int c0 = static_cast<int>(std::ceil((xs[k] - origin_x - sample_off) / p));
                int c1 = static_cast<int>(std::ceil((xs[k + 1] - origin_x - sample_off) / p)) - 1;
                c0 = std::max(c0, 0);
                c1 = std::min(c1, width - 1);
                for (int c = c0; c <= c1; ++c) slice.set(c, r, true);
            }
        }
        stack.slices.push_back(std::move(slice));
    }

    if (stats) *stats = local;
    return stack;
}

TriangleMesh extract_surface(const SliceStack& v) {
    if (v.slices.empty()) throw std::runtime_error("extract_surface: empty stack");
    const int w = v.slices.front().width();
    const int h = v.slices.front().height();
    const int nz = static_cast<int>(v.slices.size());
    const double p = v.in_plane_pitch();
    const double ox = v.slices.front().origin_x();
    const double oy = v.slices.front().origin_y();

    auto occ = [&](int i, int j, int k) {
        if (k < 0 || k >= nz) return false;
        return v.slices[static_cast<size_t>(k)].get(i, j);
    };

    TriangleMesh mesh;
    std::unordered_map<long long, int> corner_index;
    auto corner = [&](int i, int j, int k) {
        const long long key =
            (static_cast<long long>(k) * (h + 1) + j) * (w + 1) + i;
        auto [it, inserted] = corner_index.try_emplace(key, static_cast<int>(mesh.vertices.size()));
        if (inserted)
            mesh.vertices.push_back({ox + (i - 0.5) * p, oy + (j - 0.5) * p,
                                     v.z_origin + k * v.layer_height});
        return it->second;
    };
    auto quad = [&](int a, int b, int c, int d) {
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
    };

    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < h; ++j) {
            for (int i = 0; i < w; ++i) {
                if (!occ(i, j, k)) continue;
                if (!occ(i + 1, j, k))  // +x
                    quad(corner(i + 1, j, k), corner(i + 1, j + 1, k),
                         corner(i + 1, j + 1, k + 1), corner(i + 1, j, k + 1));
                if (!occ(i - 1, j, k))  // -x
                    quad(corner(i, j, k), corner(i, j, k + 1),
                         corner(i, j + 1, k + 1), corner(i, j + 1, k));
                if (!occ(i, j + 1, k))  // +y
                    quad(corner(i, j + 1, k), corner(i, j + 1, k + 1),
                         corner(i + 1, j + 1, k + 1), corner(i + 1, j + 1, k));
                if (!occ(i, j - 1, k))  // -y
                    quad(corner(i, j, k), corner(i + 1, j, k),
                         corner(i + 1, j, k + 1), corner(i, j, k + 1));
                if (!occ(i, j, k + 1))  // +z
                    quad(corner(i, j, k + 1), corner(i + 1, j, k + 1),
                         corner(i + 1, j + 1, k + 1), corner(i, j + 1, k + 1));
                if (!occ(i, j, k - 1))  // -z
                    quad(corner(i, j, k), corner(i, j + 1, k),
                         corner(i + 1, j + 1, k), corner(i + 1, j, k));
            }
        }
    }
    if (mesh.triangles.empty()) throw std::runtime_error("extract_surface: no foreground voxels");
    return mesh;
}

}  // namespace slicefix
