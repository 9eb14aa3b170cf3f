#include "slicefix/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <zlib.h>

namespace slicefix {

BinaryRaster::BinaryRaster(int width, int height, double pitch_mm,
                           double origin_x_mm, double origin_y_mm)
    : width_(width),
      height_(height),
      pitch_(pitch_mm),
      origin_x_(origin_x_mm),
      origin_y_(origin_y_mm),
      bits_(static_cast<size_t>(width) * static_cast<size_t>(height), 0) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("BinaryRaster: width and height must be >= 1");
    if (!(pitch_mm > 0.0))
        throw std::invalid_argument("BinaryRaster: pitch must be > 0");
}

long long BinaryRaster::foreground_count() const {
    return std::accumulate(bits_.begin(), bits_.end(), 0LL,
                           [](long long acc, std::uint8_t v) { return acc + (v != 0); });
}

bool BinaryRaster::comparable_with(const BinaryRaster& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           pitch_ == other.pitch_ && origin_x_ == other.origin_x_ &&
           origin_y_ == other.origin_y_;
}

bool BinaryRaster::operator==(const BinaryRaster& other) const {
    return comparable_with(other) && bits_ == other.bits_;
}

BinaryRaster BinaryRaster::blank_like() const {
    return BinaryRaster(width_, height_, pitch_, origin_x_, origin_y_);
}

StructuringElement StructuringElement::disk(int radius_px, double diameter_mm) {
    if (radius_px < 0) throw std::invalid_argument("StructuringElement: radius_px < 0");
    StructuringElement f;
    f.radius_px = radius_px;
    f.diameter_mm = diameter_mm;
    const int r2 = radius_px * radius_px;
    for (int dy = -radius_px; dy <= radius_px; ++dy)
        for (int dx = -radius_px; dx <= radius_px; ++dx)
            if (dx * dx + dy * dy <= r2) f.offsets.emplace_back(dx, dy);
    return f;
}

StructuringElement StructuringElement::from_diameter(double diameter_mm, double pitch_mm) {
    if (!(diameter_mm >= 0.0) || !(pitch_mm > 0.0))
        throw std::invalid_argument("StructuringElement: bad diameter or pitch");
    // ties round half up; the 1e-9 guard keeps exact ties (e.g. 1.2 / 0.8)
    // from landing just below .5 in floating point
    const int radius = static_cast<int>(std::floor(diameter_mm / (2.0 * pitch_mm) + 0.5 + 1e-9));
    StructuringElement f = disk(radius, diameter_mm);
    return f;
}

BinaryRaster erode(const BinaryRaster& s, const StructuringElement& f) {
    BinaryRaster out = s.blank_like();
    const int w = s.width(), h = s.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool all = true;
            for (const auto& [dx, dy] : f.offsets) {
                if (!s.get(x + dx, y + dy)) {
                    all = false;
                    break;
                }
            }
            if (all) out.set(x, y, true);
        }
    }
    return out;
}

BinaryRaster dilate(const BinaryRaster& s, const StructuringElement& f) {
    BinaryRaster out = s.blank_like();
    const int w = s.width(), h = s.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!s.get(x, y)) continue;
            for (const auto& [dx, dy] : f.offsets) {
                const int px = x + dx, py = y + dy;
                if (px >= 0 && py >= 0 && px < w && py < h) out.set(px, py, true);
            }
        }
    }
    return out;
}

BinaryRaster open(const BinaryRaster& s, const StructuringElement& f) {
    return dilate(erode(s, f), f);
}

Neighborhood neighborhood(const BinaryRaster& s, int x, int y) {
    Neighborhood n;
    for (int k = 0; k < 8; ++k) {
        const auto [dx, dy] = kNeighborOffsets[static_cast<size_t>(k)];
        n.x[static_cast<size_t>(k)] = s.get(x + dx, y + dy);
    }
    return n;
}

DiffCounts symmetric_diff_counts(const BinaryRaster& a, const BinaryRaster& b) {
    if (!a.comparable_with(b))
        throw std::invalid_argument("symmetric_diff_counts: rasters are not comparable");
    DiffCounts d;
    const auto& ab = a.bits();
    const auto& bb = b.bits();
    for (size_t i = 0; i < ab.size(); ++i) {
        if (bb[i] && !ab[i]) ++d.added;
        if (ab[i] && !bb[i]) ++d.removed;
    }
    return d;
}

ComponentLabels connected_components(const BinaryRaster& s, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw std::invalid_argument("connected_components: connectivity must be 4 or 8");
    const int w = s.width(), h = s.height();
    ComponentLabels out;
    out.labels.assign(static_cast<size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (!s.get(x, y) || out.labels[idx] != 0) continue;
            const int label = ++out.count;
            out.labels[idx] = label;
            stack.clear();
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int k = 0; k < 8; ++k) {
                    const auto [dx, dy] = kNeighborOffsets[static_cast<size_t>(k)];
                    if (connectivity == 4 && dx != 0 && dy != 0) continue;
                    const int nx = cx + dx, ny = cy + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const size_t nidx = static_cast<size_t>(ny) * w + nx;
                    if (s.get(nx, ny) && out.labels[nidx] == 0) {
                        out.labels[nidx] = label;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
        }
    }
    return out;
}

int euler_number(const BinaryRaster& s) {
    const int w = s.width(), h = s.height();
    const int comps = connected_components(s, 8).count;

    // 4-connected background components; those touching the border belong to
    // the unbounded background and are not holes.
    BinaryRaster bg = s.blank_like();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) bg.set(x, y, !s.get(x, y));
    const ComponentLabels bgl = connected_components(bg, 4);
    std::vector<char> touches(static_cast<size_t>(bgl.count) + 1, 0);
    for (int x = 0; x < w; ++x) {
        if (int l = bgl.labels[static_cast<size_t>(x)]) touches[static_cast<size_t>(l)] = 1;
        if (int l = bgl.labels[static_cast<size_t>(h - 1) * w + x]) touches[static_cast<size_t>(l)] = 1;
    }
    for (int y = 0; y < h; ++y) {
        if (int l = bgl.labels[static_cast<size_t>(y) * w]) touches[static_cast<size_t>(l)] = 1;
        if (int l = bgl.labels[static_cast<size_t>(y) * w + (w - 1)]) touches[static_cast<size_t>(l)] = 1;
    }
    int holes = 0;
    for (int l = 1; l <= bgl.count; ++l)
        if (!touches[static_cast<size_t>(l)]) ++holes;
    return comps - holes;
}

BinaryRaster raster_union(const BinaryRaster& a, const BinaryRaster& b) {
    if (!a.comparable_with(b))
        throw std::invalid_argument("raster_union: rasters are not comparable");
    BinaryRaster out = a;
    auto& ob = out.bits();
    const auto& bb = b.bits();
    for (size_t i = 0; i < ob.size(); ++i) ob[i] = ob[i] | bb[i];
    return out;
}

bool raster_subset(const BinaryRaster& a, const BinaryRaster& b) {
    if (!a.comparable_with(b))
        throw std::invalid_argument("raster_subset: rasters are not comparable");
    const auto& ab = a.bits();
    const auto& bb = b.bits();
    for (size_t i = 0; i < ab.size(); ++i)
        if (ab[i] && !bb[i]) return false;
    return true;
}

namespace {

std::vector<std::uint8_t> gray_rows_topdown(const BinaryRaster& s) {
    std::vector<std::uint8_t> px;
    px.reserve(static_cast<size_t>(s.width()) * s.height());
    for (int y = s.height() - 1; y >= 0; --y)
        for (int x = 0; x < s.width(); ++x) px.push_back(s.get(x, y) ? 255 : 0);
    return px;
}

void append_be32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(static_cast<std::uint8_t>(x >> 24));
    v.push_back(static_cast<std::uint8_t>(x >> 16));
    v.push_back(static_cast<std::uint8_t>(x >> 8));
    v.push_back(static_cast<std::uint8_t>(x));
}

void write_chunk(std::ofstream& out, const char type[4],
                 const std::vector<std::uint8_t>& data) {
    std::vector<std::uint8_t> buf;
    append_be32(buf, static_cast<std::uint32_t>(data.size()));
    buf.insert(buf.end(), type, type + 4);
    buf.insert(buf.end(), data.begin(), data.end());
    const auto crc = crc32(0L, buf.data() + 4, static_cast<uInt>(buf.size() - 4));
    append_be32(buf, static_cast<std::uint32_t>(crc));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

}  // namespace

void write_pgm(const BinaryRaster& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << s.width() << " " << s.height() << "\n255\n";
    const auto px = gray_rows_topdown(s);
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

void write_png(const BinaryRaster& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_png: cannot open " + path);
    static const std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    out.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<std::uint8_t> ihdr;
    append_be32(ihdr, static_cast<std::uint32_t>(s.width()));
    append_be32(ihdr, static_cast<std::uint32_t>(s.height()));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    write_chunk(out, "IHDR", ihdr);

    const auto px = gray_rows_topdown(s);
    std::vector<std::uint8_t> raw;
    raw.reserve(px.size() + static_cast<size_t>(s.height()));
    for (int row = 0; row < s.height(); ++row) {
        raw.push_back(0);  // filter: none
        const size_t off = static_cast<size_t>(row) * s.width();
        raw.insert(raw.end(), px.begin() + static_cast<long>(off),
                   px.begin() + static_cast<long>(off) + s.width());
    }
    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw std::runtime_error("write_png: deflate failed");
    comp.resize(comp_len);
    write_chunk(out, "IDAT", comp);
    write_chunk(out, "IEND", {});
    if (!out) throw std::runtime_error("write_png: write failed for " + path);
}

}  // namespace slicefix
