#include <doctest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "slicefix/raster.hpp"

using namespace slicefix;

namespace {

// Independent per-pixel double-loop oracles.
BinaryRaster oracle_erode(const BinaryRaster& s, const StructuringElement& f) {
    BinaryRaster out = s.blank_like();
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            bool keep = true;
            for (int dy = -f.radius_px; dy <= f.radius_px && keep; ++dy)
                for (int dx = -f.radius_px; dx <= f.radius_px && keep; ++dx)
                    if (dx * dx + dy * dy <= f.radius_px * f.radius_px && !s.get(x + dx, y + dy))
                        keep = false;
            if (keep) out.set(x, y, true);
        }
    }
    return out;
}

BinaryRaster oracle_dilate(const BinaryRaster& s, const StructuringElement& f) {
    BinaryRaster out = s.blank_like();
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            bool hit = false;
            for (int dy = -f.radius_px; dy <= f.radius_px && !hit; ++dy)
                for (int dx = -f.radius_px; dx <= f.radius_px && !hit; ++dx)
                    if (dx * dx + dy * dy <= f.radius_px * f.radius_px && s.get(x + dx, y + dy))
                        hit = true;
            if (hit) out.set(x, y, true);
        }
    }
    return out;
}

BinaryRaster full_raster(int w, int h) {
    BinaryRaster r(w, h, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) r.set(x, y, true);
    return r;
}

}  // namespace

TEST_CASE("structuring element rasterization") {
    const auto f0 = StructuringElement::disk(0);
    CHECK(f0.offsets.size() == 1);

    const auto f2 = StructuringElement::disk(2);
    CHECK(f2.offsets.size() == 13);
    for (const auto& [dx, dy] : f2.offsets) {
        CHECK(dx * dx + dy * dy <= 4);
        // point symmetry
        bool found = false;
        for (const auto& [ex, ey] : f2.offsets)
            if (ex == -dx && ey == -dy) found = true;
        CHECK(found);
    }

    // radius from physical diameter, ties rounding half up
    CHECK(StructuringElement::from_diameter(1.2, 0.2).radius_px == 3);
    CHECK(StructuringElement::from_diameter(1.2, 0.4).radius_px == 2);  // 1.5 -> 2
    CHECK(StructuringElement::from_diameter(0.0, 0.2).radius_px == 0);
}

TEST_CASE("erode examples") {
    const auto f2 = StructuringElement::disk(2);
    const BinaryRaster all = full_raster(20, 20);
    const BinaryRaster eroded = erode(all, f2);
    CHECK(eroded == oracle_erode(all, f2));
    CHECK(eroded.foreground_count() == 16 * 16);
    CHECK(eroded.get(2, 2));
    CHECK(eroded.get(17, 17));
    CHECK_FALSE(eroded.get(1, 10));

    BinaryRaster any(7, 7, 1.0);
    any.set(3, 3, true);
    any.set(1, 5, true);
    CHECK(erode(any, StructuringElement::disk(0)) == any);

    BinaryRaster single(9, 9, 1.0);
    single.set(4, 4, true);
    CHECK(erode(single, StructuringElement::disk(1)).foreground_count() == 0);
}

TEST_CASE("dilate examples") {
    BinaryRaster single(9, 9, 1.0);
    single.set(4, 4, true);
    const BinaryRaster d = dilate(single, StructuringElement::disk(2));
    CHECK(d.foreground_count() == 13);
    CHECK(d.get(4, 6));
    CHECK_FALSE(d.get(6, 6));

    const BinaryRaster empty(9, 9, 1.0);
    CHECK(dilate(empty, StructuringElement::disk(2)).foreground_count() == 0);
}

TEST_CASE("open examples") {
    const auto f1 = StructuringElement::disk(1);
    const BinaryRaster line = fixtures::line_raster(8, 3);
    CHECK(open(line, f1).foreground_count() == 0);  // sub-element feature disappears

    // L-shaped block vs oracle
    BinaryRaster ell(14, 14, 1.0);
    for (int y = 2; y < 12; ++y)
        for (int x = 2; x < 12; ++x)
            if (x < 7 || y < 7) ell.set(x, y, true);
    const auto f2 = StructuringElement::disk(2);
    const BinaryRaster opened = open(ell, f2);
    CHECK(opened == oracle_dilate(oracle_erode(ell, f2), f2));
    CHECK(raster_subset(opened, ell));  // anti-extensive
    CHECK(open(opened, f2) == opened);  // already open -> unchanged
}

TEST_CASE("neighborhood numbering and padding") {
    const BinaryRaster all = full_raster(5, 5);
    const Neighborhood corner = neighborhood(all, 0, 0);
    CHECK(corner.at(1));        // east
    CHECK(corner.at(2));        // north-east
    CHECK(corner.at(3));        // north
    CHECK_FALSE(corner.at(4));  // out of bounds
    CHECK_FALSE(corner.at(5));
    CHECK_FALSE(corner.at(6));
    CHECK_FALSE(corner.at(7));
    CHECK_FALSE(corner.at(8));
    CHECK(corner.at(9) == corner.at(1));  // index wrap

    BinaryRaster iso(5, 5, 1.0);
    iso.set(2, 2, true);
    const Neighborhood in = neighborhood(iso, 2, 2);
    for (int k = 1; k <= 8; ++k) CHECK_FALSE(in.at(k));

    const Neighborhood mid = neighborhood(all, 2, 2);
    for (int k = 1; k <= 8; ++k) CHECK(mid.at(k));
}

TEST_CASE("symmetric diff counts") {
    BinaryRaster a(6, 6, 1.0);
    CHECK(symmetric_diff_counts(a, a).added == 0);
    CHECK(symmetric_diff_counts(a, a).removed == 0);

    BinaryRaster b = a;
    for (int i = 0; i < 5; ++i) b.set(i, 2, true);
    const auto d = symmetric_diff_counts(a, b);
    CHECK(d.added == 5);
    CHECK(d.removed == 0);

    const BinaryRaster slice = fixtures::disk_raster(5);
    const auto f = StructuringElement::disk(2);
    const BinaryRaster opened = open(slice, f);
    const auto d2 = symmetric_diff_counts(slice, opened);
    CHECK(d2.added == 0);
    CHECK(d2.removed == slice.foreground_count() - opened.foreground_count());

    BinaryRaster other(7, 6, 1.0);
    CHECK_THROWS_AS((void)symmetric_diff_counts(a, other), std::invalid_argument);
}

TEST_CASE("connected components") {
    BinaryRaster diag(4, 4, 1.0);
    diag.set(1, 1, true);
    diag.set(2, 2, true);
    CHECK(connected_components(diag, 8).count == 1);
    CHECK(connected_components(diag, 4).count == 2);
    CHECK(connected_components(BinaryRaster(4, 4, 1.0), 8).count == 0);

    // deterministic row-major label order
    const auto labels = connected_components(diag, 4).labels;
    CHECK(labels[1 * 4 + 1] == 1);
    CHECK(labels[2 * 4 + 2] == 2);
}

TEST_CASE("euler number") {
    CHECK(euler_number(fixtures::disk_raster(5)) == 1);
    CHECK(euler_number(fixtures::annulus_raster(7, 3)) == 0);

    BinaryRaster two(12, 6, 1.0);
    for (int y = 1; y < 5; ++y)
        for (int x = 1; x < 5; ++x) two.set(x, y, true);
    for (int y = 1; y < 5; ++y)
        for (int x = 7; x < 11; ++x) two.set(x, y, true);
    CHECK(euler_number(two) == 2);
}

TEST_CASE("morphology properties on random rasters") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryRaster s = fixtures::random_raster(rng, 16, 16, 0.5);
        const BinaryRaster g = fixtures::random_raster(rng, 16, 16, 0.3);
        const auto f = StructuringElement::disk(1 + trial % 2);

        CHECK(erode(s, f) == oracle_erode(s, f));
        CHECK(dilate(s, f) == oracle_dilate(s, f));

        // adjointness: g <= erode(s) iff dilate(g) <= s
        CHECK(raster_subset(g, erode(s, f)) == raster_subset(dilate(g, f), s));

        // monotonicity: t = s | g contains s
        const BinaryRaster t = raster_union(s, g);
        CHECK(raster_subset(erode(s, f), erode(t, f)));
        CHECK(raster_subset(dilate(s, f), dilate(t, f)));

        // opening: anti-extensive and idempotent
        const BinaryRaster o = open(s, f);
        CHECK(raster_subset(o, s));
        CHECK(open(o, f) == o);
    }
}

TEST_CASE("pgm layout") {
    BinaryRaster r(3, 2, 1.0);
    r.set(0, 1, true);  // top-left in image space
    r.set(2, 0, true);  // bottom-right
    const std::string path = "test_raster_out.pgm";
    write_pgm(r, path);
    std::ifstream in(path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(data.substr(0, 11) == "P5\n3 2\n255\n");
    const std::string px = data.substr(11);
    REQUIRE(px.size() == 6);
    // rows written top-down: y=1 row first
    CHECK(static_cast<unsigned char>(px[0]) == 255);
    CHECK(static_cast<unsigned char>(px[1]) == 0);
    CHECK(static_cast<unsigned char>(px[5]) == 255);
    std::remove(path.c_str());

    write_png(r, "test_raster_out.png");
    std::ifstream png("test_raster_out.png", std::ios::binary);
    std::string pdata((std::istreambuf_iterator<char>(png)), std::istreambuf_iterator<char>());
    CHECK(pdata.size() > 8);
    CHECK(static_cast<unsigned char>(pdata[1]) == 'P');
    std::remove("test_raster_out.png");
}
