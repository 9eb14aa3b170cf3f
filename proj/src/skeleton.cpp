#include "slicefix/skeleton.hpp"

#include <algorithm>
#include <array>

namespace slicefix {

int crossing_number(const Neighborhood& n) {
    int count = 0;
    for (int i = 1; i <= 4; ++i) {
        if (!n.at(2 * i - 1) && (n.at(2 * i) || n.at(2 * i + 1))) ++count;
    }
    return count;
}

ThinningDecision deletable(const Neighborhood& n, int subiteration) {
    ThinningDecision d;
    if (crossing_number(n) != 1) {
        d.reason = ThinningDecision::Reason::fail_crossing;
        return d;
    }
    int n1 = 0, n2 = 0;
    for (int k = 1; k <= 4; ++k) {
        n1 += (n.at(2 * k - 1) || n.at(2 * k)) ? 1 : 0;
        n2 += (n.at(2 * k) || n.at(2 * k + 1)) ? 1 : 0;
    }
    const int m = std::min(n1, n2);
    if (m < 2 || m > 3) {
        d.reason = ThinningDecision::Reason::fail_neighbor_count;
        return d;
    }
    const bool dir_ok = (subiteration == 1)
                            ? !((n.at(2) || n.at(3) || !n.at(8)) && n.at(1))
                            : !((n.at(6) || n.at(7) || !n.at(4)) && n.at(5));
    if (!dir_ok) {
        d.reason = ThinningDecision::Reason::fail_directional;
        return d;
    }
    d.remove = true;
    d.reason = ThinningDecision::Reason::deletable;
    return d;
}

namespace {

struct DeleteTables {
    std::array<std::uint8_t, 256> sub[2];
    DeleteTables() {
        for (int code = 0; code < 256; ++code) {
            const Neighborhood n = Neighborhood::from_code(code);
            sub[0][static_cast<size_t>(code)] = deletable(n, 1).remove;
            sub[1][static_cast<size_t>(code)] = deletable(n, 2).remove;
        }
    }
};

const DeleteTables& tables() {
    static const DeleteTables t;
    return t;
}

int neighborhood_code(const BinaryRaster& s, int x, int y) {
    int code = 0;
    for (int k = 0; k < 8; ++k) {
        const auto [dx, dy] = kNeighborOffsets[static_cast<size_t>(k)];
        if (s.get(x + dx, y + dy)) code |= 1 << k;
    }
    return code;
}

/// Incremental thinning engine. Between passes, only pixels whose
/// neighborhood changed (deleted or restored pixels and their 8-neighbors)
/// can change deletability, so the engine tracks a candidate worklist
/// instead of rescanning the whole grid every pass.
class ActiveThinner {
public:
    explicit ActiveThinner(const BinaryRaster& s)
        : img_(s), stamp_(s.bits().size(), 0) {
        candidates_.reserve(img_.bits().size() / 4 + 16);
        for (size_t i = 0; i < img_.bits().size(); ++i)
            if (img_.bits()[i]) candidates_.push_back(static_cast<int>(i));
    }

    const BinaryRaster& image() const { return img_; }

    /// Marks a pixel and its 8-neighbors for re-evaluation in the next pass.
    void touch(int idx) {
        const int w = img_.width(), h = img_.height();
        const int x = idx % w, y = idx / w;
        touch_one(idx);
        for (const auto& [dx, dy] : kNeighborOffsets) {
            const int nx = x + dx, ny = y + dy;
            if (nx >= 0 && ny >= 0 && nx < w && ny < h) touch_one(ny * w + nx);
        }
    }

    /// Applies a pixel deletion from outside the thinning itself (spur
    /// removal) so the worklist stays consistent.
    void erase(int idx) {
        img_.bits()[static_cast<size_t>(idx)] = 0;
        touch(idx);
    }
    /// Applies an externally restored pixel (erosion lower bound).
    void restore(int idx) {
        img_.bits()[static_cast<size_t>(idx)] = 1;
        touch(idx);
    }

    /// One full thinning iteration (both subiterations, mark-then-sweep).
    /// Returns the number of deleted pixels.
    int pass() {
        // swap in pixels touched since the previous pass
        if (!touched_.empty() || epoch_ > 0) {
            candidates_.swap(touched_);
            touched_.clear();
        }
        ++epoch_;
        const int w = img_.width();
        int deleted = 0;
        for (int sub = 0; sub < 2; ++sub) {
            marks_.clear();
            const auto& table = tables().sub[sub];
            for (int idx : candidates_) {
                if (!img_.bits()[static_cast<size_t>(idx)]) continue;
                const int code = neighborhood_code(img_, idx % w, idx / w);
                if (table[static_cast<size_t>(code)]) marks_.push_back(idx);
            }
            for (int idx : marks_) {
                auto& bit = img_.bits()[static_cast<size_t>(idx)];
                if (!bit) continue;  // duplicate candidate
                bit = 0;
                ++deleted;
                touch(idx);
                // deletions can enable the second subiteration in this pass
                if (sub == 0) append_candidates(idx);
            }
        }
        return deleted;
    }

private:
    void touch_one(int idx) {
        if (stamp_[static_cast<size_t>(idx)] == epoch_ + 1) return;
        stamp_[static_cast<size_t>(idx)] = epoch_ + 1;
        touched_.push_back(idx);
    }

    void append_candidates(int idx) {
        const int w = img_.width(), h = img_.height();
        const int x = idx % w, y = idx / w;
        for (const auto& [dx, dy] : kNeighborOffsets) {
            const int nx = x + dx, ny = y + dy;
            if (nx >= 0 && ny >= 0 && nx < w && ny < h)
                candidates_.push_back(ny * w + nx);
        }
    }

    BinaryRaster img_;
    std::vector<int> candidates_;
    std::vector<int> touched_;
    std::vector<int> marks_;
    std::vector<int> stamp_;
    int epoch_ = 0;
};

}  // namespace

BinaryRaster thin_pass(const BinaryRaster& s) {
    BinaryRaster out = s;
    std::vector<size_t> marks;
    const int w = s.width(), h = s.height();
    for (int sub = 0; sub < 2; ++sub) {
        marks.clear();
        const auto& table = tables().sub[sub];
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!out.get(x, y)) continue;
                if (table[static_cast<size_t>(neighborhood_code(out, x, y))])
                    marks.push_back(static_cast<size_t>(y) * w + x);
            }
        }
        for (size_t idx : marks) out.bits()[idx] = 0;
    }
    return out;
}

std::vector<std::pair<int, int>> spur_pixels(const BinaryRaster& s) {
    std::vector<std::pair<int, int>> out;
    const int w = s.width(), h = s.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!s.get(x, y)) continue;
            int neighbors = 0;
            for (const auto& [dx, dy] : kNeighborOffsets)
                if (s.get(x + dx, y + dy)) ++neighbors;
            if (neighbors <= 1) out.emplace_back(x, y);
        }
    }
    return out;
}

MesoSkeletonResult meso_skeleton(const BinaryRaster& s, const StructuringElement& f,
                                 const MesoSkeletonOptions& options) {
    MesoSkeletonResult result;
    result.erosion = erode(s, f);

    const int w = s.width();
    ActiveThinner thinner(s);
    const int max_iterations = 4 * (s.width() + s.height()) + 16;
    int j = 0;
    BinaryRaster prev = s;
    while (j < max_iterations) {
        prev = thinner.image();
        thinner.pass();
        if (options.spur_removal && j < f.radius_px) {
            // Deleting an endpoint of a longer curve is always homotopic, but
            // wiping a whole component (isolated pixel, or both pixels of a
            // 2-px component in one parallel sweep) is not; those pixels are
            // spared so the skeleton stays homotopic to the slice.
            const BinaryRaster& img = thinner.image();
            std::vector<int> to_erase;
            for (const auto& [x, y] : spur_pixels(img)) {
                int nx = -1, ny = -1, neighbors = 0;
                for (const auto& [dx, dy] : kNeighborOffsets) {
                    if (img.get(x + dx, y + dy)) {
                        ++neighbors;
                        nx = x + dx;
                        ny = y + dy;
                    }
                }
                if (neighbors == 0) continue;  // isolated pixel: last of its component
                if (neighbors == 1) {
                    int back = 0;
                    for (const auto& [dx, dy] : kNeighborOffsets)
                        if (img.get(nx + dx, ny + dy)) ++back;
                    // 2-px component: keep the row-major-first pixel
                    if (back == 1 && (y < ny || (y == ny && x < nx))) continue;
                }
                to_erase.push_back(y * w + x);
            }
            for (int idx : to_erase) thinner.erase(idx);
        }
        // lower bound: the skeleton may never shrink below the erosion
        const auto& ebits = result.erosion.bits();
        const auto& ibits = thinner.image().bits();
        for (size_t i = 0; i < ebits.size(); ++i) {
            if (ebits[i] && !ibits[i]) thinner.restore(static_cast<int>(i));
        }
        ++j;
        if (options.snapshot) options.snapshot(j, thinner.image());
        // fixed point can involve pixels deleted and restored in the same
        // iteration, so convergence is judged on the image itself
        if (thinner.image() == prev) {
            result.converged = true;
            break;
        }
    }
    result.iterations = j;
    result.skeleton = thinner.image();
    return result;
}

std::optional<int> max_element_diameter(const BinaryRaster& s) {
    if (s.empty()) return std::nullopt;
    ActiveThinner thinner(s);
    int changing_passes = 0;
    const int max_passes = std::max(s.width(), s.height()) / 2 + 2;
    for (int p = 0; p < max_passes; ++p) {
        if (thinner.pass() == 0) break;
        ++changing_passes;
    }
    return 2 * changing_passes;
}

}  // namespace slicefix
